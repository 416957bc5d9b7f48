//! Sparse multivariate polynomials over ℚ(i) on a fixed symbol table.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;

/// The fixed symbol table. Declaration order is the lexicographic variable order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sym {
    /// The independent variable of the equation.
    Z = 0,
    /// Symbolic base point of a local expansion.
    ZHat,
    /// Leading coefficient of a seed zero or pole.
    Alpha,
    /// Regular value of the seed at the neighbouring lattice point.
    K,
    Lambda,
    Mu,
    Nu,
    /// Free constant in the `b = k a - mu` family.
    Kappa,
}

pub const NSYM: usize = 8;

impl Sym {
    pub const ALL: [Sym; NSYM] = [Sym::Z, Sym::ZHat, Sym::Alpha, Sym::K, Sym::Lambda, Sym::Mu, Sym::Nu, Sym::Kappa];

    pub fn name(self) -> &'static str {
        match self {
            Sym::Z => "z",
            Sym::ZHat => "zh",
            Sym::Alpha => "alpha",
            Sym::K => "K",
            Sym::Lambda => "lambda",
            Sym::Mu => "mu",
            Sym::Nu => "nu",
            Sym::Kappa => "k",
        }
    }

    pub fn from_name(s: &str) -> Option<Sym> {
        Sym::ALL.iter().copied().find(|v| v.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

pub type Exps = [u16; NSYM];

const ZERO_EXPS: Exps = [0; NSYM];

/// Terms sorted by descending lexicographic exponent vector; no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPoly {
    terms: Vec<(Exps, GaussRat)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        MPoly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly {
                terms: vec![(ZERO_EXPS, c)],
            }
        }
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::constant(GaussRat::from_int(n))
    }

    pub fn var(s: Sym) -> Self {
        let mut e = ZERO_EXPS;
        e[s.index()] = 1;
        MPoly {
            terms: vec![(e, GaussRat::one())],
        }
    }

    pub fn monomial(exps: Exps, c: GaussRat) -> Self {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(exps, c)] }
        }
    }

    fn from_map(map: HashMap<Exps, GaussRat>) -> Self {
        let mut terms: Vec<(Exps, GaussRat)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Exps, GaussRat)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ZERO_EXPS && self.terms[0].1.is_one()
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(e, c)] if *e == ZERO_EXPS => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<&(Exps, GaussRat)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> GaussRat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(GaussRat::zero)
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.iter().map(|(e, _)| e[s.index()] as u32).max().unwrap_or(0)
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.terms.iter().any(|(e, _)| e[s.index()] > 0)
    }

    /// Variables that occur with a positive exponent.
    pub fn symbols(&self) -> Vec<Sym> {
        Sym::ALL.iter().copied().filter(|s| self.contains(*s)).collect()
    }

    /// True if the polynomial is a single monomial in one variable, `s^1` with coefficient 1.
    pub fn as_variable(&self) -> Option<Sym> {
        match self.terms.as_slice() {
            [(e, c)] if c.is_one() => {
                let nz: Vec<usize> = (0..NSYM).filter(|&i| e[i] > 0).collect();
                if nz.len() == 1 && e[nz[0]] == 1 {
                    Some(Sym::ALL[nz[0]])
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, exps: &Exps) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut n = *e;
                    for i in 0..NSYM {
                        n[i] += exps[i];
                    }
                    (n, c.clone())
                })
                .collect(),
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Exps {
        let mut m = match self.terms.first() {
            Some((e, _)) => *e,
            None => return ZERO_EXPS,
        };
        for (e, _) in &self.terms[1..] {
            for i in 0..NSYM {
                m[i] = m[i].min(e[i]);
            }
        }
        m
    }

    /// Divides by a monomial that divides every term.
    pub fn div_monomial(&self, exps: &Exps) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut n = *e;
                    for i in 0..NSYM {
                        n[i] -= exps[i];
                    }
                    (n, c.clone())
                })
                .collect(),
        }
    }

    /// Splits off the leading coefficient: `self = lc * monic`.
    pub fn monic(&self) -> (GaussRat, MPoly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (lc, self.clone());
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        (lc, self.scale(&inv))
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, s: Sym) -> MPoly {
        let i = s.index();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut n = *e;
            n[i] -= 1;
            terms.push((n, c * &GaussRat::from_int(e[i] as i64)));
        }
        // lowering one exponent preserves the relative lex order
        MPoly { terms }
    }

    /// Replaces `s` by `q`.
    pub fn substitute(&self, s: Sym, q: &MPoly) -> MPoly {
        let i = s.index();
        if !self.contains(s) {
            return self.clone();
        }
        let mut by_power: Vec<HashMap<Exps, GaussRat>> = Vec::new();
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            if by_power.len() <= k {
                by_power.resize_with(k + 1, HashMap::new);
            }
            let mut n = *e;
            n[i] = 0;
            by_power[k].insert(n, c.clone());
        }
        let mut acc = MPoly::zero();
        let mut qpow = MPoly::one();
        for (k, part) in by_power.into_iter().enumerate() {
            if k > 0 {
                qpow = &qpow * q;
            }
            if !part.is_empty() {
                acc = &acc + &(&MPoly::from_map(part) * &qpow);
            }
        }
        acc
    }

    /// `s -> s + c`.
    pub fn shift(&self, s: Sym, c: &GaussRat) -> MPoly {
        if c.is_zero() {
            return self.clone();
        }
        self.substitute(s, &(&MPoly::var(s) + &MPoly::constant(c.clone())))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inv()?));
        }
        let (ld, lc) = d.leading().cloned()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Exps, GaussRat)> = Vec::new();
        while let Some((lr, cr)) = rem.leading().cloned() {
            let mut qe = ZERO_EXPS;
            for i in 0..NSYM {
                if lr[i] < ld[i] {
                    return None;
                }
                qe[i] = lr[i] - ld[i];
            }
            let qc = &cr * &lc_inv;
            rem = &rem - &d.mul_monomial(&qe).scale(&qc);
            quot.push((qe, qc));
        }
        // quotient terms were produced in strictly decreasing order
        Some(MPoly { terms: quot })
    }

    pub fn eval_complex(&self, point: &[Complex64; NSYM]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = c.to_complex();
            for i in 0..NSYM {
                if e[i] > 0 {
                    t *= point[i].powu(e[i] as u32);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_exact(&self, s: Sym, v: &GaussRat) -> MPoly {
        self.substitute(s, &MPoly::constant(v.clone()))
    }

    fn merge(&self, rhs: &MPoly, negate: bool) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &rhs.terms;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push((b[j].0, if negate { -&b[j].1 } else { b[j].1.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            out.push((t.0, if negate { -&t.1 } else { t.1.clone() }));
        }
        MPoly { terms: out }
    }
}

impl<'a> std::ops::Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.merge(rhs, false)
    }
}

impl<'a> std::ops::Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.merge(rhs, true)
    }
}

impl<'a> std::ops::Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Exps, GaussRat> = HashMap::with_capacity(self.len() * rhs.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for i in 0..NSYM {
                    e[i] += eb[i];
                }
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v = &*v + &p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        MPoly::from_map(acc)
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = (0..NSYM)
                .filter(|&i| e[i] > 0)
                .map(|i| {
                    if e[i] == 1 {
                        Sym::ALL[i].name().to_string()
                    } else {
                        format!("{}^{}", Sym::ALL[i].name(), e[i])
                    }
                })
                .collect();
            let (neg, mag) = if c.is_real() && c.re < num_rational::BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> MPoly {
        MPoly::var(Sym::Z)
    }

    #[test]
    fn shift_of_square() {
        let p = z().pow(2);
        let s = p.shift(Sym::Z, &GaussRat::from_int(1));
        let expect = &(&z().pow(2) + &z().scale(&GaussRat::from_int(2))) + &MPoly::one();
        assert_eq!(s, expect);
    }

    #[test]
    fn exact_division() {
        let a = &z() + &MPoly::var(Sym::Alpha);
        let b = &z() - &MPoly::one();
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!((&prod + &MPoly::one()).exact_div(&a), None);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&z().pow(2).scale(&GaussRat::from_int(3)) - &MPoly::var(Sym::Alpha)) + &MPoly::from_int(-1);
        assert_eq!(p.to_string(), "3*z^2 - alpha - 1");
    }
}
