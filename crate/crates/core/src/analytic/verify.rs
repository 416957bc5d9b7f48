//! Numeric residual checks for closed-form solutions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::weierstrass::Weierstrass;
use crate::algebra::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct VerifierReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub samples: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerifierReport {
    fn new(check: &str, params: BTreeMap<String, String>, samples: usize, max_residual: f64, tol: f64) -> Self {
        VerifierReport {
            check: check.into(),
            params,
            samples,
            max_residual,
            tol,
            pass: max_residual <= tol,
        }
    }
}

pub fn fmt_c(z: Complex64) -> String {
    format!("{:.17e}{:+.17e}i", z.re, z.im)
}

/// `w(z) = alpha [℘(Omega z) - ℘(Omega)]` solving the `mu = nu = 0` equation with parameter `lambda`.
#[derive(Clone, Debug)]
pub struct EllipticParams {
    pub g2: Complex64,
    pub g3: Complex64,
    pub omega: Complex64,
    pub lambda: Complex64,
    pub alpha: Complex64,
    /// `+1` for the principal root of `alpha^2`, `-1` for its negative.
    pub alpha_sign: i8,
    pub wp: Weierstrass,
    pub wp_omega: Complex64,
}

impl EllipticParams {
    pub fn new(g2: Complex64, g3: Complex64, omega: Complex64, lambda: Complex64) -> Result<Self> {
        if lambda.norm() == 0.0 {
            return Err(Error::Hypothesis("lambda must be nonzero".into()));
        }
        let wp = Weierstrass::new(g2, g3)?;
        let (p, dp) = wp
            .eval(omega)
            .map_err(|_| Error::Hypothesis("Omega is a lattice point: requires ℘′(Ω; g2, g3) finite".into()))?;
        if dp.norm() <= 1e-9 * (1.0 + p.norm().powf(1.5)) {
            return Err(Error::Hypothesis("requires ℘′(Ω; g2, g3) ≠ 0; Ω is a half-period".into()));
        }
        let alpha = (-lambda * omega / dp).sqrt();
        Ok(EllipticParams {
            g2,
            g3,
            omega,
            lambda,
            alpha,
            alpha_sign: 1,
            wp,
            wp_omega: p,
        })
    }

    /// Same family with `alpha` replaced, e.g. by `i alpha` to flip the sign of `alpha^2`.
    pub fn with_alpha(mut self, alpha: Complex64) -> Self {
        self.alpha = alpha;
        self.alpha_sign = 0;
        self
    }

    pub fn negated_alpha(mut self) -> Self {
        self.alpha = -self.alpha;
        self.alpha_sign = -self.alpha_sign;
        self
    }

    pub fn w(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (p, dp) = self.wp.eval(self.omega * z)?;
        Ok((self.alpha * (p - self.wp_omega), self.alpha * self.omega * dp))
    }

    fn params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("g2".into(), fmt_c(self.g2));
        m.insert("g3".into(), fmt_c(self.g3));
        m.insert("Omega".into(), fmt_c(self.omega));
        m.insert("lambda".into(), fmt_c(self.lambda));
        m.insert("alpha".into(), fmt_c(self.alpha));
        m.insert("alpha_sign".into(), self.alpha_sign.to_string());
        m
    }
}

/// Maximum of `|w(z+1) - w(z-1) - lambda w'/w^2|` over random points away from poles and zeros.
pub fn verify_elliptic_family(params: &EllipticParams, samples: usize, tol: f64, seed: u64) -> Result<VerifierReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lat = params.wp.lattice.scaled(1.0 / params.omega);
    let keep = 0.1 * lat.w1.norm();
    let far = |z: Complex64| (z - lat.nearest(z)).norm() >= keep;
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut tries = 0;
    while taken < samples {
        tries += 1;
        if tries > 1000 * samples.max(1) {
            return Err(Error::Numeric("could not find sample points away from poles".into()));
        }
        let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let one = Complex64::new(1.0, 0.0);
        // poles of w(z), w(z +- 1) and zeros of w(z) at z = +-1 mod lattice
        if ![z, z + one, z - one, z + 2.0 * one, z - 2.0 * one].iter().all(|&p| far(p)) {
            continue;
        }
        let (w, dw) = params.w(z)?;
        let (wp1, _) = params.w(z + one)?;
        let (wm1, _) = params.w(z - one)?;
        let res = (wp1 - wm1 - params.lambda * dw / (w * w)).norm();
        worst = worst.max(res);
        taken += 1;
    }
    Ok(VerifierReport::new("elliptic_family", params.params(), samples, worst, tol))
}

/// `w = C exp(p pi i z)` in `w(z+1) - w(z-1) + a w'/w = b` with `b = p pi i a + perturb`.
pub fn verify_exponential(
    a: &RatFunc,
    p: i64,
    c: Complex64,
    perturb: Complex64,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<VerifierReport> {
    if c.norm() == 0.0 {
        return Err(Error::Hypothesis("C must be nonzero".into()));
    }
    let rho = Complex64::new(0.0, p as f64 * PI);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = |z: Complex64| c * (rho * z).exp();
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut tries = 0;
    while taken < samples {
        tries += 1;
        if tries > 1000 * samples.max(1) {
            return Err(Error::Numeric("coefficients singular on the sample box".into()));
        }
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5));
        let az = a.eval(z);
        if !az.is_finite() || az.norm() > 1e6 {
            continue;
        }
        let b = rho * az + perturb;
        let wz = w(z);
        let lhs = w(z + 1.0) - w(z - 1.0) + az * (rho * wz) / wz;
        worst = worst.max((lhs - b).norm());
        taken += 1;
    }
    let mut params = BTreeMap::new();
    params.insert("a".into(), a.to_string());
    params.insert("p".into(), p.to_string());
    params.insert("C".into(), fmt_c(c));
    params.insert("b_perturbation".into(), fmt_c(perturb));
    Ok(VerifierReport::new("exponential_family", params, samples, worst, tol))
}

/// Residual of `v_t = v^2 (v(x+1,t) - v(x-1,t))` under `v = (-2 lambda nu t)^(-1/2) w(z)`,
/// `z = x - log t / (2 nu)`, with `w(z+1)` fixed by the `mu = 0` equation (plus `perturb`).
pub fn mkdv_identity_check(
    lambda: Complex64,
    nu: Complex64,
    samples: usize,
    perturb: Complex64,
    tol: f64,
    seed: u64,
) -> Result<VerifierReport> {
    if (lambda * nu).norm() == 0.0 {
        return Err(Error::Hypothesis("requires λν ≠ 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let t = Complex64::new(rng.gen_range(0.5..2.0), 0.0);
        let base = -2.0 * lambda * nu * t;
        if base.arg().abs() > PI - 1e-9 {
            return Err(Error::Numeric(format!("-2λνt = {} lies on the branch cut", base)));
        }
        let w = unit(&mut rng) + Complex64::new(1.5, 0.0);
        let dw = unit(&mut rng);
        let wm1 = unit(&mut rng);
        let wp1 = wm1 + (lambda * dw + lambda * nu * w) / (w * w) + perturb;
        let s = base.powf(-0.5);
        let ds = lambda * nu * base.powf(-1.5);
        let zt = -1.0 / (2.0 * nu * t);
        let v = s * w;
        let lhs = ds * w + s * dw * zt;
        let rhs = v * v * (s * wp1 - s * wm1);
        worst = worst.max((lhs - rhs).norm());
    }
    let mut params = BTreeMap::new();
    params.insert("lambda".into(), fmt_c(lambda));
    params.insert("nu".into(), fmt_c(nu));
    params.insert("perturbation".into(), fmt_c(perturb));
    Ok(VerifierReport::new("mkdv_reduction", params, samples, worst, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params() -> EllipticParams {
        EllipticParams::new(c(2.0, 0.0), c(1.0, 0.0), c(0.3, 0.2), c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn elliptic_family_and_controls() {
        let p = params();
        assert!(verify_elliptic_family(&p, 100, 1e-8, 1).unwrap().pass);
        assert!(verify_elliptic_family(&p.clone().negated_alpha(), 100, 1e-8, 1).unwrap().pass);
        let flipped = p.clone().with_alpha(p.alpha * c(0.0, 1.0));
        assert!(verify_elliptic_family(&flipped, 100, 1e-8, 1).unwrap().max_residual > 1e-3);
    }

    #[test]
    fn half_period_rejected() {
        let wp = Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        let half = wp.lattice.w1 / 2.0;
        let err = EllipticParams::new(c(2.0, 0.0), c(1.0, 0.0), half, c(1.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("≠ 0"));
    }

    #[test]
    fn exponential_cases() {
        let zero = c(0.0, 0.0);
        let a = RatFunc::parse("z^2").unwrap();
        assert!(verify_exponential(&a, 2, c(1.0, 0.0), zero, 100, 1e-10, 3).unwrap().pass);
        let one = RatFunc::one();
        assert!(verify_exponential(&one, 1, c(3.0, -2.0), zero, 100, 1e-10, 3).unwrap().pass);
        let r = verify_exponential(&one, 1, c(3.0, -2.0), c(1.0, 0.0), 100, 1e-10, 3).unwrap();
        assert!((r.max_residual - 1.0).abs() < 1e-9);
        assert!(verify_exponential(&one, 1, zero, zero, 10, 1e-10, 3).is_err());
    }

    #[test]
    fn mkdv_cases() {
        let (l, n) = (c(2.0, 0.0), c(-1.0 / 6.0, 0.0));
        let zero = c(0.0, 0.0);
        assert!(mkdv_identity_check(l, n, 100, zero, 1e-12, 4).unwrap().pass);
        assert!(mkdv_identity_check(l, n, 100, c(1.0, 0.0), 1e-12, 4).unwrap().max_residual > 0.1);
        assert!(mkdv_identity_check(l, zero, 10, zero, 1e-12, 4)
            .unwrap_err()
            .to_string()
            .contains("λν ≠ 0"));
        assert!(mkdv_identity_check(l, c(1.0, 0.0), 10, zero, 1e-12, 4).is_err());
    }
}
