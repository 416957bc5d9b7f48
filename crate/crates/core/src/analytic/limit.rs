//! Formal continuum limit of the `mu = 0` inverse-square equation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Monomial `eps^e kappa^k y0^a0 y1^a1 ...`, with trailing zero exponents trimmed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub eps: u32,
    pub kappa: u32,
    pub ys: Vec<u32>,
}

impl Mono {
    fn one() -> Self {
        Mono {
            eps: 0,
            kappa: 0,
            ys: Vec::new(),
        }
    }

    fn mul(&self, o: &Mono) -> Mono {
        let n = self.ys.len().max(o.ys.len());
        let ys = (0..n)
            .map(|i| self.ys.get(i).copied().unwrap_or(0) + o.ys.get(i).copied().unwrap_or(0))
            .collect();
        Mono {
            eps: self.eps + o.eps,
            kappa: self.kappa + o.kappa,
            ys,
        }
    }
}

/// Polynomial in `eps`, `kappa` and the derivatives `y_j` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPoly {
    terms: BTreeMap<Mono, BigRational>,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn one() -> Self {
        DiffPoly::constant(BigRational::one())
    }

    /// `y_j`, the `j`-th derivative of `y`.
    pub fn y(j: usize) -> Self {
        let mut ys = vec![0; j + 1];
        ys[j] = 1;
        let mut p = DiffPoly::zero();
        p.add_term(Mono { eps: 0, kappa: 0, ys }, BigRational::one());
        p
    }

    pub fn eps_pow(e: u32) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(
            Mono {
                eps: e,
                kappa: 0,
                ys: Vec::new(),
            },
            BigRational::one(),
        );
        p
    }

    pub fn kappa() -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(
            Mono {
                eps: 0,
                kappa: 1,
                ys: Vec::new(),
            },
            BigRational::one(),
        );
        p
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &DiffPoly) -> DiffPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &DiffPoly) -> DiffPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> DiffPoly {
        let mut r = DiffPoly::zero();
        for (m, v) in &self.terms {
            r.add_term(m.clone(), v * c);
        }
        r
    }

    /// Product with all terms above `eps^max_eps` dropped.
    pub fn mul_trunc(&self, o: &DiffPoly, max_eps: u32) -> DiffPoly {
        let mut r = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                if m1.eps + m2.eps <= max_eps {
                    r.add_term(m1.mul(m2), c1 * c2);
                }
            }
        }
        r
    }

    /// Coefficient of `eps^k`.
    pub fn eps_coeff(&self, k: u32) -> DiffPoly {
        let mut r = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.eps == k {
                r.add_term(Mono { eps: 0, ..m.clone() }, c.clone());
            }
        }
        r
    }

    pub fn min_eps(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.eps).min()
    }

    pub fn max_eps(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.eps).max()
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // higher-order derivatives first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let key = |m: &Mono| {
                let mut ys = m.ys.clone();
                ys.reverse();
                (std::cmp::Reverse(m.eps), m.ys.len(), ys, m.kappa)
            };
            key(b).cmp(&key(a))
        });
        for (i, (m, c)) in terms.iter().enumerate() {
            let mut factors = Vec::new();
            if m.eps > 0 {
                factors.push(if m.eps == 1 { "eps".to_string() } else { format!("eps^{}", m.eps) });
            }
            if m.kappa > 0 {
                factors.push(if m.kappa == 1 {
                    "kappa".to_string()
                } else {
                    format!("kappa^{}", m.kappa)
                });
            }
            for (j, &e) in m.ys.iter().enumerate() {
                if e == 1 {
                    factors.push(format!("y{}", j));
                } else if e > 1 {
                    factors.push(format!("y{}^{}", j, e));
                }
            }
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let body = factors.join("*");
            if body.is_empty() {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "{}", body)?;
            } else {
                write!(f, "{}*{}", a, body)?;
            }
        }
        Ok(())
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuumLimit {
    pub truncation: u32,
    /// Order `k` of the correction in `lambda = 2 + kappa eps^k`, if any.
    pub lambda_correction: Option<u32>,
    #[serde(skip)]
    pub residual: DiffPoly,
    pub coefficients: BTreeMap<u32, String>,
    pub leading_order: Option<u32>,
    pub notes: Vec<String>,
}

impl ContinuumLimit {
    pub fn coeff(&self, k: u32) -> DiffPoly {
        self.residual.eps_coeff(k)
    }
}

/// `LHS - RHS` of `w(z+1) - w(z-1) = (lambda w' + lambda nu w)/w^2` under
/// `w = 1 - eps^2 y(eps z)`, `lambda = 2 (+ kappa eps^k)`, `lambda nu = -eps^5/3`,
/// exact through `eps^truncation`.
pub fn continuum_limit_w22(truncation: u32, lambda_correction: Option<u32>) -> Result<ContinuumLimit> {
    if truncation < 7 {
        return Err(Error::Hypothesis(format!(
            "truncation {} in eps cannot certify the eps^5 coefficient; need at least 7",
            truncation
        )));
    }
    if lambda_correction == Some(0) {
        return Err(Error::Hypothesis("lambda correction must be of positive order in eps".into()));
    }
    let t = truncation;
    // w(z + s) = 1 - eps^2 sum_j y_j (s eps)^j / j!
    let shifted = |sign: i64| {
        let mut w = DiffPoly::one();
        for j in 0..=(t - 2) as usize {
            let c = BigRational::new(BigInt::from(sign.pow(j as u32)), factorial(j));
            w = w.sub(&DiffPoly::y(j).mul_trunc(&DiffPoly::eps_pow(2 + j as u32), t).scale(&c));
        }
        w
    };
    let lhs = shifted(1).sub(&shifted(-1));
    let w = DiffPoly::one().sub(&DiffPoly::y(0).mul_trunc(&DiffPoly::eps_pow(2), t));
    let dw = DiffPoly::y(1).mul_trunc(&DiffPoly::eps_pow(3), t).scale(&q(-1, 1));
    let mut lambda = DiffPoly::constant(q(2, 1));
    if let Some(k) = lambda_correction {
        lambda = lambda.add(&DiffPoly::kappa().mul_trunc(&DiffPoly::eps_pow(k), t));
    }
    let lambda_nu = DiffPoly::eps_pow(5).scale(&q(-1, 3));
    // 1/w^2 = sum_m (m + 1) (eps^2 y0)^m
    let u = DiffPoly::y(0).mul_trunc(&DiffPoly::eps_pow(2), t);
    let mut inv_sq = DiffPoly::zero();
    let mut pow = DiffPoly::one();
    for m in 0..=(t / 2) {
        inv_sq = inv_sq.add(&pow.scale(&q(m as i64 + 1, 1)));
        pow = pow.mul_trunc(&u, t);
    }
    let numer = lambda.mul_trunc(&dw, t).add(&lambda_nu.mul_trunc(&w, t));
    let rhs = numer.mul_trunc(&inv_sq, t);
    let residual = lhs.sub(&rhs);

    let mut notes = Vec::new();
    let leading = residual.min_eps();
    if let Some(k) = leading {
        notes.push(format!("leading order eps^{}: {} = 0", k, residual.eps_coeff(k)));
    }
    if lambda_correction.is_none() && residual.eps_coeff(5) == target_eps5() {
        notes.push("eps^5 coefficient is -1/3 (y3 - 12*y0*y1 - 1): y''' = 12 y y' + 1".into());
    }
    if let Some(k) = lambda_correction {
        if k < 3 {
            notes.push(format!(
                "a correction kappa*eps^{} to lambda = 2 enters at eps^{} through lambda*w' and changes the limit unless kappa = 0",
                k,
                k + 3
            ));
        }
    }
    let coefficients = (0..=t)
        .map(|k| (k, residual.eps_coeff(k)))
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.to_string()))
        .collect();
    Ok(ContinuumLimit {
        truncation: t,
        lambda_correction,
        residual,
        coefficients,
        leading_order: leading,
        notes,
    })
}

/// `-1/3 (y3 - 12 y0 y1 - 1)`.
pub fn target_eps5() -> DiffPoly {
    DiffPoly::y(3)
        .sub(&DiffPoly::y(0).mul_trunc(&DiffPoly::y(1), 0).scale(&q(12, 1)))
        .sub(&DiffPoly::one())
        .scale(&q(-1, 3))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        let cl = continuum_limit_w22(7, None).unwrap();
        for k in 0..5 {
            assert!(cl.coeff(k).is_zero(), "eps^{}: {}", k, cl.coeff(k));
        }
        assert_eq!(cl.coeff(5), target_eps5());
        assert_eq!(cl.leading_order, Some(5));
        assert_eq!(cl.coeff(5).to_string(), "-1/3*y3 + 4*y0*y1 + 1/3");
    }

    #[test]
    fn result_is_stable_in_truncation() {
        let a = continuum_limit_w22(7, None).unwrap();
        let b = continuum_limit_w22(11, None).unwrap();
        for k in 0..=7 {
            assert_eq!(a.coeff(k), b.coeff(k));
        }
    }

    #[test]
    fn too_small_truncation() {
        assert!(continuum_limit_w22(6, None).is_err());
    }

    #[test]
    fn order_one_correction_enters_early() {
        let cl = continuum_limit_w22(8, Some(1)).unwrap();
        assert_eq!(cl.leading_order, Some(4));
        assert_eq!(cl.coeff(4), DiffPoly::kappa().mul_trunc(&DiffPoly::y(1), 0));
    }

    /// Independent route: exact residual for `y(t) = t^3 + t` at a small rational `eps`.
    #[test]
    fn matches_direct_evaluation() {
        let eps = q(1, 1000);
        let t0 = q(1, 3);
        let y = |t: &BigRational| t * t * t + t;
        let dy = |t: &BigRational| q(3, 1) * t * t + q(1, 1);
        let e2 = &eps * &eps;
        let w = |t: &BigRational| BigRational::one() - &e2 * y(t);
        let lhs = w(&(&t0 + &eps)) - w(&(&t0 - &eps));
        let w0 = w(&t0);
        let dw = -(&e2 * &eps) * dy(&t0);
        let lnu = -eps.pow(5) / q(3, 1);
        let rhs = (q(2, 1) * dw + lnu * &w0) / (&w0 * &w0);
        let ratio = (lhs - rhs) / eps.pow(5);
        // c5 with y0 = 10/27, y1 = 4/3, y3 = 6
        let (y0, y1, y3) = (y(&t0), dy(&t0), q(6, 1));
        let c5 = -(y3 - q(12, 1) * y0 * y1 - q(1, 1)) / q(3, 1);
        let diff = (ratio - c5).abs();
        assert!(diff < q(1, 100), "{}", diff);
    }
}
