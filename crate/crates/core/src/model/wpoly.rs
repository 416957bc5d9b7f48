//! Polynomials in `w` whose coefficients are rational functions of `z`.

use std::fmt;

use num_traits::Zero;

use crate::algebra::{FieldElem, GaussRat, RatFunc};

#[derive(Clone, Debug, PartialEq)]
pub struct WPoly {
    coeffs: Vec<RatFunc>,
}

impl WPoly {
    /// Coefficients indexed by the power of `w`; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        WPoly { coeffs }
    }

    pub fn zero() -> Self {
        WPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        WPoly::new(vec![RatFunc::one()])
    }

    /// `w - r`.
    pub fn linear_root(r: &RatFunc) -> Self {
        WPoly::new(vec![-r, RatFunc::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `w`; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFunc {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn leading(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && (&self.leading() - &RatFunc::one()).is_zero()
    }

    pub fn field_coeffs(&self) -> Vec<FieldElem> {
        self.coeffs.iter().map(|c| c.as_field().clone()).collect()
    }

    pub fn scale(&self, r: &RatFunc) -> WPoly {
        WPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn mul(&self, other: &WPoly) -> WPoly {
        if self.is_zero() || other.is_zero() {
            return WPoly::zero();
        }
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        WPoly::new(out)
    }

    pub fn add(&self, other: &WPoly) -> WPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        WPoly::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn neg(&self) -> WPoly {
        WPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn pow(&self, e: u32) -> WPoly {
        (0..e).fold(WPoly::one(), |acc, _| acc.mul(self))
    }

    /// `P(z, r(z))`.
    pub fn eval_at(&self, r: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * r) + c;
        }
        acc
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&RatFunc) -> RatFunc) -> WPoly {
        WPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// `Q(z, 0)`.
    pub fn constant_term(&self) -> RatFunc {
        self.coeff(0)
    }

    pub fn equals(&self, other: &WPoly) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| (&self.coeff(k) - &other.coeff(k)).is_zero())
    }

    /// Splits a quadratic into linear factors when its discriminant is a
    /// square in ℚ(i)(z). Returns the two roots.
    pub fn split_quadratic(&self) -> Option<(RatFunc, RatFunc)> {
        if self.degree() != 2 {
            return None;
        }
        let (c0, c1, c2) = (self.coeff(0), self.coeff(1), self.coeff(2));
        let four = RatFunc::from_int(4);
        let disc = &(&c1 * &c1) - &(&four * &(&c2 * &c0));
        let s = rat_sqrt(&disc)?;
        let two_a = &RatFunc::from_int(2) * &c2;
        let r1 = &(&(-&c1) + &s) / &two_a;
        let r2 = &(&(-&c1) - &s) / &two_a;
        Some((r1, r2))
    }
}

/// Exact square root of a rational function of `z` with constant coefficients, if one exists.
pub fn rat_sqrt(r: &RatFunc) -> Option<RatFunc> {
    if r.is_zero() {
        return Some(RatFunc::zero());
    }
    let (num, den) = r.as_field().to_parts();
    // num/den is a square iff num*den is, since num/den = num*den/den^2
    let prod = &num * &den;
    let coeffs = univariate_coeffs(&prod)?;
    let root = poly_sqrt(&coeffs)?;
    let root = RatFunc::poly(&root);
    let den = RatFunc::new(FieldElem::from_poly(den))?;
    Some(&root / &den)
}

fn univariate_coeffs(p: &crate::algebra::MPoly) -> Option<Vec<GaussRat>> {
    let deg = p.degree_in(crate::algebra::Sym::Z) as usize;
    let mut out = vec![GaussRat::zero(); deg + 1];
    for (e, c) in p.terms() {
        if e[1..].iter().any(|&x| x > 0) {
            return None;
        }
        out[e[0] as usize] = c.clone();
    }
    Some(out)
}

/// Square root of a univariate polynomial given low-to-high.
fn poly_sqrt(c: &[GaussRat]) -> Option<Vec<GaussRat>> {
    let n = c.len() - 1;
    if n % 2 == 1 {
        return None;
    }
    let m = n / 2;
    let lead = c[n].sqrt()?;
    let two_lead = &lead + &lead;
    let mut r = vec![GaussRat::zero(); m + 1];
    r[m] = lead;
    // coefficient of z^(n-k) in r^2 determines r[m-k]
    for k in 1..=m {
        let mut s = c[n - k].clone();
        for i in 1..k {
            s = &s - &(&r[m - i] * &r[m - (k - i)]);
        }
        r[m - k] = &s / &two_lead;
    }
    let mut sq = vec![GaussRat::zero(); n + 1];
    for i in 0..=m {
        for j in 0..=m {
            sq[i + j] = &sq[i + j] + &(&r[i] * &r[j]);
        }
    }
    if sq == c {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let w = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{}", k),
            };
            let cs = c.to_string();
            parts.push(if w.is_empty() {
                format!("({})", cs)
            } else if cs == "1" {
                w
            } else {
                format!("({})*{}", cs, w)
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn split_known_quadratic() {
        let q = WPoly::linear_root(&rf("z")).mul(&WPoly::linear_root(&rf("2*z")));
        let (a, b) = q.split_quadratic().unwrap();
        let mut got = [a.to_string(), b.to_string()];
        got.sort();
        assert_eq!(got, ["2*z".to_string(), "z".to_string()]);
    }

    #[test]
    fn irreducible_quadratic_is_not_split() {
        let q = WPoly::new(vec![rf("-z"), RatFunc::zero(), RatFunc::one()]);
        assert!(q.split_quadratic().is_none());
    }

    #[test]
    fn sqrt_of_rational_square() {
        let r = rf("(z+1)^2/(z-3)^4");
        let s = rat_sqrt(&r).unwrap();
        assert_eq!(&s * &s, r);
    }
}
