//! Closed-form meromorphic functions with exact pole and value-point inventories.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::verify::EllipticParams;
use super::weierstrass::{Lattice, Weierstrass};
use crate::error::{Error, Result};

/// Which singularities a counting function sees: poles of `f`, or `a`-points (poles of `1/(f - a)`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Target {
    Poles,
    Value(Complex64),
}

/// `f(z) = alpha (℘(Omega z) - shift)`.
#[derive(Clone, Debug)]
pub struct EllipticModel {
    pub wp: Arc<Weierstrass>,
    pub omega: Complex64,
    pub alpha: Complex64,
    pub shift: Complex64,
    /// A known solution of `℘(u) = shift`.
    pub shift_point: Option<Complex64>,
    lattice: Lattice,
}

impl EllipticModel {
    pub fn new(wp: Weierstrass, omega: Complex64, alpha: Complex64, shift: Complex64) -> Self {
        let lattice = wp.lattice.scaled(1.0 / omega);
        EllipticModel {
            wp: Arc::new(wp),
            omega,
            alpha,
            shift,
            shift_point: None,
            lattice,
        }
    }

    /// Lattice of poles in the `z` plane.
    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    /// Solutions `z` of `f(z) = a`, each with multiplicity, as shifts of the pole lattice.
    fn value_shifts(&self, a: Complex64) -> Result<Vec<(Complex64, u32)>> {
        let c = self.shift + a / self.alpha;
        let u = match self.shift_point {
            Some(u) if a.norm() == 0.0 => u,
            _ => self.wp.inverse(c)?,
        };
        let (_, dp) = self.wp.eval(u)?;
        let z = u / self.omega;
        if dp.norm() <= 1e-8 * (1.0 + c.norm().powf(1.5)) {
            Ok(vec![(z, 2)])
        } else {
            Ok(vec![(z, 1), (-z, 1)])
        }
    }
}

#[derive(Clone, Debug)]
pub enum FunctionModel {
    Elliptic(EllipticModel),
    /// `c exp(rho z)`.
    Exponential {
        c: Complex64,
        rho: Complex64,
    },
    /// `c prod (z - zeros)^m / prod (z - poles)^n`.
    Rational {
        c: Complex64,
        zeros: Vec<(Complex64, u32)>,
        poles: Vec<(Complex64, u32)>,
    },
    /// `sum_i coeffs[i] base^i` with constant coefficients.
    PolyOf {
        base: Box<FunctionModel>,
        coeffs: Vec<Complex64>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub tag: String,
    pub description: String,
}

impl FunctionModel {
    /// The elliptic solution `alpha [℘(Omega z) - ℘(Omega)]`; zeros sit at `z = ±1` modulo the lattice.
    pub fn elliptic_solution(p: &EllipticParams) -> Self {
        let mut m = EllipticModel::new(p.wp.clone(), p.omega, p.alpha, p.wp_omega);
        m.shift_point = Some(p.omega);
        FunctionModel::Elliptic(m)
    }

    pub fn weierstrass(wp: Weierstrass) -> Self {
        let one = Complex64::new(1.0, 0.0);
        FunctionModel::Elliptic(EllipticModel::new(wp, one, one, Complex64::new(0.0, 0.0)))
    }

    pub fn exponential(c: Complex64, rho: Complex64) -> Result<Self> {
        if c.norm() == 0.0 || rho.norm() == 0.0 {
            return Err(Error::Hypothesis("exponential model needs C ≠ 0 and rho ≠ 0".into()));
        }
        Ok(FunctionModel::Exponential { c, rho })
    }

    pub fn power(base: FunctionModel, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        FunctionModel::PolyOf {
            base: Box::new(base),
            coeffs,
        }
    }

    pub fn summary(&self) -> ModelSummary {
        let (tag, description) = match self {
            FunctionModel::Elliptic(m) => (
                "elliptic",
                format!("{} (℘(({})z; {}, {}) - {})", m.alpha, m.omega, m.wp.g2, m.wp.g3, m.shift),
            ),
            FunctionModel::Exponential { c, rho } => ("exponential", format!("{} exp(({})z)", c, rho)),
            FunctionModel::Rational { c, zeros, poles } => {
                ("rational", format!("{} with {} zeros and {} poles", c, zeros.len(), poles.len()))
            }
            FunctionModel::PolyOf { base, coeffs } => (
                "polynomial_of",
                format!(
                    "degree {} polynomial of {}",
                    coeffs.len().saturating_sub(1),
                    base.summary().description
                ),
            ),
        };
        ModelSummary {
            tag: tag.into(),
            description,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            FunctionModel::Elliptic(m) => Ok(m.alpha * (m.wp.wp(m.omega * z)? - m.shift)),
            FunctionModel::Exponential { c, rho } => Ok(c * (rho * z).exp()),
            FunctionModel::Rational { c, zeros, poles } => {
                let mut v = *c;
                for (p, n) in poles {
                    let d = z - p;
                    if d.norm() == 0.0 {
                        return Err(Error::Pole(format!("{}", z)));
                    }
                    v /= d.powi(*n as i32);
                }
                for (r, m) in zeros {
                    v *= (z - r).powi(*m as i32);
                }
                Ok(v)
            }
            FunctionModel::PolyOf { base, coeffs } => {
                let b = base.eval(z)?;
                Ok(coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * b + c))
            }
        }
    }

    /// `log|f(z)|` for poles, `-log|f(z) - a|` for `a`-points; `+inf` at a singularity.
    pub fn log_abs(&self, z: Complex64, target: Target) -> f64 {
        if let FunctionModel::Exponential { c, rho } = self {
            let l = c.norm().ln() + (rho * z).re;
            return match target {
                Target::Poles => l,
                Target::Value(a) if a.norm() == 0.0 => -l,
                Target::Value(a) => {
                    if l > 40.0 {
                        -l
                    } else if l < -40.0 {
                        -a.norm().ln()
                    } else {
                        -(c * (rho * z).exp() - a).norm().ln()
                    }
                }
            };
        }
        match (self.eval(z), target) {
            (Err(_), _) => f64::INFINITY,
            (Ok(v), Target::Poles) => v.norm().ln(),
            (Ok(v), Target::Value(a)) => -(v - a).norm().ln(),
        }
    }

    /// Singularities of the target with `|z| <= r`, with multiplicity.
    pub fn points(&self, target: Target, r: f64) -> Result<Vec<(Complex64, u32)>> {
        match (self, target) {
            (FunctionModel::Elliptic(m), Target::Poles) => Ok(m
                .lattice
                .points_within(Complex64::new(0.0, 0.0), r)
                .into_iter()
                .map(|p| (p, 2))
                .collect()),
            (FunctionModel::Elliptic(m), Target::Value(a)) => {
                let mut out = Vec::new();
                for (s, mult) in m.value_shifts(a)? {
                    out.extend(m.lattice.points_within(s, r).into_iter().map(|p| (p, mult)));
                }
                Ok(out)
            }
            (FunctionModel::Exponential { .. }, Target::Poles) => Ok(Vec::new()),
            (FunctionModel::Exponential { .. }, Target::Value(a)) if a.norm() == 0.0 => Ok(Vec::new()),
            (FunctionModel::Exponential { c, rho }, Target::Value(a)) => {
                let base = (a / c).ln();
                let kmax = ((r * rho.norm() + base.norm()) / (2.0 * std::f64::consts::PI)).ceil() as i64 + 1;
                Ok((-kmax..=kmax)
                    .map(|k| (base + Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)) / rho)
                    .filter(|z| z.norm() <= r)
                    .map(|z| (z, 1))
                    .collect())
            }
            (FunctionModel::Rational { poles, .. }, Target::Poles) => Ok(poles.iter().filter(|(p, _)| p.norm() <= r).copied().collect()),
            (FunctionModel::Rational { zeros, .. }, Target::Value(a)) if a.norm() == 0.0 => {
                Ok(zeros.iter().filter(|(p, _)| p.norm() <= r).copied().collect())
            }
            (FunctionModel::PolyOf { base, coeffs }, Target::Poles) => {
                let deg = coeffs.iter().rposition(|c| c.norm() != 0.0).unwrap_or(0) as u32;
                if deg == 0 {
                    return Ok(Vec::new());
                }
                Ok(base.points(Target::Poles, r)?.into_iter().map(|(p, m)| (p, m * deg)).collect())
            }
            _ => Err(Error::Hypothesis(format!(
                "{} model has no exact inventory for this value",
                self.summary().tag
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elliptic_solution_zeros_at_plus_minus_one() {
        let p = EllipticParams::new(c(2.0, 0.0), c(1.0, 0.0), c(0.3, 0.2), c(1.0, 0.0)).unwrap();
        let f = FunctionModel::elliptic_solution(&p);
        let zs = f.points(Target::Value(c(0.0, 0.0)), 1.5).unwrap();
        assert!(zs.iter().any(|(z, m)| (z - c(1.0, 0.0)).norm() < 1e-12 && *m == 1));
        assert!(zs.iter().any(|(z, m)| (z - c(-1.0, 0.0)).norm() < 1e-12 && *m == 1));
        for (z, _) in &zs {
            assert!(f.eval(*z).unwrap().norm() < 1e-8);
        }
        let ps = f.points(Target::Poles, 3.0).unwrap();
        assert!(ps.iter().all(|(_, m)| *m == 2));
        assert!(f.eval(ps[0].0).is_err());
    }

    #[test]
    fn value_points_of_wp() {
        let f = FunctionModel::weierstrass(Weierstrass::new(c(1.0, 2.0), c(-0.5, 0.25)).unwrap());
        let a = c(1.0, 1.0);
        let pts = f.points(Target::Value(a), 4.0).unwrap();
        assert!(!pts.is_empty());
        for (z, _) in pts {
            assert!((f.eval(z).unwrap() - a).norm() < 1e-8);
        }
    }

    #[test]
    fn exponential_a_points() {
        let f = FunctionModel::exponential(c(2.0, 0.0), c(0.0, std::f64::consts::PI)).unwrap();
        let pts = f.points(Target::Value(c(1.0, 0.0)), 10.0).unwrap();
        // z = 2k + i ln 2 / pi
        assert_eq!(pts.len(), 9);
        for (z, _) in pts {
            assert!((f.eval(z).unwrap() - 1.0).norm() < 1e-12);
        }
        assert!(f.points(Target::Value(c(0.0, 0.0)), 10.0).unwrap().is_empty());
    }
}
