//! The three equation classes.
//!
//! All of them share the left side `w(z+1) - w(z-1)`:
//!
//! * log-derivative class: `w(z+1) - w(z-1) + a w'/w = P(z,w)/Q(z,w)`
//! * pure log-derivative: `w(z+1) - w(z-1) + a w'/w = b`
//! * inverse square: `w(z+1) - w(z-1) = (a w' + b w)/w^2 + c`

use serde::Serialize;

use super::wpoly::WPoly;
use crate::algebra::{GaussRat, RatFunc};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqClass {
    LogDeriv,
    PureLogDeriv,
    InverseSquare,
}

impl EqClass {
    pub fn name(self) -> &'static str {
        match self {
            EqClass::LogDeriv => "log-deriv",
            EqClass::PureLogDeriv => "pure-log-deriv",
            EqClass::InverseSquare => "inverse-square",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "log-deriv" => Some(EqClass::LogDeriv),
            "pure-log-deriv" => Some(EqClass::PureLogDeriv),
            "inverse-square" => Some(EqClass::InverseSquare),
            _ => None,
        }
    }
}

/// `Q = prod (w - root)^mult * residual`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredQ {
    pub factors: Vec<(RatFunc, u32)>,
    /// A factor with no supplied roots, taken as irreducible on the caller's word.
    pub residual: Option<WPoly>,
}

impl FactoredQ {
    pub fn new(factors: Vec<(RatFunc, u32)>, residual: Option<WPoly>) -> Result<Self> {
        for (i, (r, m)) in factors.iter().enumerate() {
            if *m == 0 {
                return Err(Error::Schema(format!("factor {} has multiplicity 0", i)));
            }
            for (s, _) in &factors[..i] {
                if (r - s).is_zero() {
                    return Err(Error::Schema(format!("duplicate factor root {}", r)));
                }
            }
        }
        Ok(FactoredQ { factors, residual })
    }

    pub fn expand(&self) -> WPoly {
        let mut q = self.residual.clone().unwrap_or_else(WPoly::one);
        for (r, m) in &self.factors {
            q = q.mul(&WPoly::linear_root(r).pow(*m));
        }
        q
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(_, m)| *m as usize).sum::<usize>() + self.residual.as_ref().map(|r| r.degree()).unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogDerivEq {
    pub a: RatFunc,
    pub p: WPoly,
    pub q: WPoly,
    pub factored: FactoredQ,
    /// Normalizations applied while building the equation.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DelayDiffEq {
    LogDeriv(LogDerivEq),
    PureLogDeriv { a: RatFunc, b: RatFunc },
    InverseSquare { a: RatFunc, b: RatFunc, c: RatFunc },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub deg_p: usize,
    pub deg_q: usize,
    pub deg_r: usize,
}

impl DelayDiffEq {
    /// Builds a log-derivative equation. A residual factor with a non-unit
    /// leading coefficient is made monic by dividing `P` and `Q` by it.
    /// With `assert_monic` set, a non-monic residual is an error instead.
    pub fn log_deriv(a: RatFunc, p: WPoly, factored: FactoredQ, assert_monic: bool) -> Result<Self> {
        let mut notes = Vec::new();
        let mut factored = factored;
        let mut p = p;
        if p.is_zero() {
            return Err(Error::Schema("P must not be identically zero".into()));
        }
        if let Some(res) = &factored.residual {
            if res.is_zero() {
                return Err(Error::Schema("residual factor of Q is zero".into()));
            }
            if !res.is_monic() {
                if assert_monic {
                    return Err(Error::Schema("Q is not monic but the monic flag is set".into()));
                }
                let lc = res.leading();
                let inv = &RatFunc::one() / &lc;
                notes.push(format!("Q normalized to monic: P and Q divided by {}", lc));
                factored.residual = Some(res.scale(&inv));
                p = p.scale(&inv);
            }
        }
        let q = factored.expand();
        Ok(DelayDiffEq::LogDeriv(LogDerivEq { a, p, q, factored, notes }))
    }

    pub fn pure_log_deriv(a: RatFunc, b: RatFunc) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Hypothesis(
                "a(z) ≡ 0 violates the pure log-derivative class hypothesis a ≢ 0".into(),
            ));
        }
        Ok(DelayDiffEq::PureLogDeriv { a, b })
    }

    pub fn inverse_square(a: RatFunc, b: RatFunc, c: RatFunc) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Hypothesis(
                "a(z) ≡ 0 violates the inverse-square class hypothesis a ≢ 0".into(),
            ));
        }
        Ok(DelayDiffEq::InverseSquare { a, b, c })
    }

    pub fn class(&self) -> EqClass {
        match self {
            DelayDiffEq::LogDeriv(_) => EqClass::LogDeriv,
            DelayDiffEq::PureLogDeriv { .. } => EqClass::PureLogDeriv,
            DelayDiffEq::InverseSquare { .. } => EqClass::InverseSquare,
        }
    }

    pub fn a(&self) -> &RatFunc {
        match self {
            DelayDiffEq::LogDeriv(e) => &e.a,
            DelayDiffEq::PureLogDeriv { a, .. } | DelayDiffEq::InverseSquare { a, .. } => a,
        }
    }

    /// The equation satisfied by `v(z) = w(-z)`; used to run backward cascades forward.
    pub fn mirror(&self) -> DelayDiffEq {
        let neg = |r: &RatFunc| -&r.reflect();
        match self {
            DelayDiffEq::LogDeriv(e) => {
                let factors = e.factored.factors.iter().map(|(r, m)| (r.reflect(), *m)).collect();
                let residual = e.factored.residual.as_ref().map(|r| r.map(|c| c.reflect()));
                let factored = FactoredQ { factors, residual };
                DelayDiffEq::LogDeriv(LogDerivEq {
                    a: e.a.reflect(),
                    p: e.p.map(neg),
                    q: factored.expand(),
                    factored,
                    notes: e.notes.clone(),
                })
            }
            DelayDiffEq::PureLogDeriv { a, b } => DelayDiffEq::PureLogDeriv { a: a.reflect(), b: neg(b) },
            DelayDiffEq::InverseSquare { a, b, c } => DelayDiffEq::InverseSquare {
                a: a.reflect(),
                b: neg(b),
                c: neg(c),
            },
        }
    }

    /// Substitutes a value for a parameter symbol in every coefficient.
    pub fn specialize(&self, s: crate::algebra::Sym, v: &GaussRat) -> DelayDiffEq {
        let f = |r: &RatFunc| r.substitute_param(s, v);
        match self {
            DelayDiffEq::LogDeriv(e) => {
                let factors = e.factored.factors.iter().map(|(r, m)| (f(r), *m)).collect();
                let residual = e.factored.residual.as_ref().map(|r| r.map(f));
                let factored = FactoredQ { factors, residual };
                DelayDiffEq::LogDeriv(LogDerivEq {
                    a: f(&e.a),
                    p: e.p.map(f),
                    q: factored.expand(),
                    factored,
                    notes: e.notes.clone(),
                })
            }
            DelayDiffEq::PureLogDeriv { a, b } => DelayDiffEq::PureLogDeriv { a: f(a), b: f(b) },
            DelayDiffEq::InverseSquare { a, b, c } => DelayDiffEq::InverseSquare { a: f(a), b: f(b), c: f(c) },
        }
    }
}

/// Degrees of `P`, `Q` and of `R = P/Q` as a rational function of `w`.
pub fn mohonko_degree(eq: &LogDerivEq) -> DegreeReport {
    let deg_p = eq.p.degree();
    let deg_q = eq.q.degree();
    DegreeReport {
        deg_p,
        deg_q,
        deg_r: deg_p.max(deg_q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn cubic_over_two_roots(p: WPoly) -> LogDerivEq {
        let fq = FactoredQ::new(vec![(rf("z"), 1), (rf("2*z"), 1)], None).unwrap();
        match DelayDiffEq::log_deriv(rf("1"), p, fq, false).unwrap() {
            DelayDiffEq::LogDeriv(e) => e,
            _ => unreachable!(),
        }
    }

    #[test]
    fn degree_examples() {
        let p3 = WPoly::new(vec![rf("1"), rf("0"), rf("0"), rf("1")]);
        let e = cubic_over_two_roots(p3);
        assert_eq!(
            mohonko_degree(&e),
            DegreeReport {
                deg_p: 3,
                deg_q: 2,
                deg_r: 3
            }
        );
        let p4 = WPoly::new(vec![rf("0"), rf("0"), rf("0"), rf("0"), rf("1")]);
        assert_eq!(mohonko_degree(&cubic_over_two_roots(p4)).deg_r, 4);
    }

    #[test]
    fn factored_q_round_trip() {
        let fq = FactoredQ::new(vec![(rf("z"), 2), (rf("-1"), 1)], Some(WPoly::new(vec![rf("z"), rf("0"), rf("1")]))).unwrap();
        let q = fq.expand();
        assert_eq!(q.degree(), 5);
        assert_eq!(fq.degree(), 5);
        assert!(q.eval_at(&rf("z")).is_zero());
        assert!(q.eval_at(&rf("-1")).is_zero());
    }

    #[test]
    fn duplicate_roots_rejected() {
        assert!(FactoredQ::new(vec![(rf("z"), 1), (rf("2*z - z"), 1)], None).is_err());
    }

    #[test]
    fn zero_a_rejected() {
        let err = DelayDiffEq::inverse_square(rf("0"), rf("1"), rf("0")).unwrap_err();
        assert!(err.to_string().contains("a(z) ≡ 0"));
    }

    #[test]
    fn mirror_is_an_involution() {
        let eq = DelayDiffEq::inverse_square(rf("1+z"), rf("z^2"), rf("1/(z-1)")).unwrap();
        assert_eq!(eq.mirror().mirror(), eq);
    }

    #[test]
    fn monic_normalization_noted() {
        let fq = FactoredQ::new(vec![], Some(WPoly::new(vec![rf("1"), rf("2")]))).unwrap();
        let p = WPoly::new(vec![rf("3")]);
        match DelayDiffEq::log_deriv(rf("1"), p.clone(), fq.clone(), false).unwrap() {
            DelayDiffEq::LogDeriv(e) => {
                assert!(e.q.is_monic());
                assert_eq!(e.notes.len(), 1);
            }
            _ => unreachable!(),
        }
        assert!(DelayDiffEq::log_deriv(rf("1"), p, fq, true).is_err());
    }
}
