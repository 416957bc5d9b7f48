//! Necessary conditions for slow-growth meromorphic solutions, one test per class.
//!
//! Verdicts are contrapositive: a violated condition means no non-rational
//! solution of hyper-order below one exists under the class hypotheses. A
//! consistent verdict never claims that a solution exists.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra::{GaussRat, RatFunc};
use crate::error::{Error, Result};
use crate::model::resultant::shared_roots;
use crate::model::{mohonko_degree, resultant_by_roots, resultant_in_w, DegreeReport, DelayDiffEq, EqClass, LogDerivEq};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", content = "failed")]
pub enum Outcome {
    ConsistentBranchA,
    ConsistentBranchB,
    ViolatesNecessaryCondition,
    HypothesisViolation(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct W22Params {
    #[serde(serialize_with = "ser_gauss")]
    pub lambda: GaussRat,
    #[serde(serialize_with = "ser_gauss")]
    pub mu: GaussRat,
    #[serde(serialize_with = "ser_gauss")]
    pub nu: GaussRat,
}

fn ser_gauss<S: serde::Serializer>(g: &GaussRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub class: EqClass,
    pub outcome: Outcome,
    /// Every consistent branch that holds; two entries when branches overlap.
    pub branches: Vec<Outcome>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<DegreeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<W22Params>,
}

impl Verdict {
    fn new(class: EqClass, outcome: Outcome) -> Self {
        Verdict {
            class,
            branches: match &outcome {
                Outcome::ConsistentBranchA | Outcome::ConsistentBranchB => vec![outcome.clone()],
                _ => Vec::new(),
            },
            outcome,
            notes: Vec::new(),
            degrees: None,
            params: None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self.outcome, Outcome::ConsistentBranchA | Outcome::ConsistentBranchB)
    }
}

pub fn classify(eq: &DelayDiffEq) -> Result<Verdict> {
    match eq {
        DelayDiffEq::LogDeriv(e) => Ok(log_deriv_verdict(e)),
        DelayDiffEq::PureLogDeriv { .. } => pure_log_deriv_verdict(eq),
        DelayDiffEq::InverseSquare { .. } => inverse_square_verdict(eq),
    }
}

/// Log-derivative class: with rational roots of a monic `Q`, either
/// `deg P = deg Q + 1 <= 3` (branch A) or `deg R` is 0 or 1 (branch B).
pub fn log_deriv_verdict(eq: &LogDerivEq) -> Verdict {
    let mut failed = Vec::new();
    let mut notes = eq.notes.clone();
    if !eq.q.is_monic() {
        failed.push("Q is not monic".to_string());
    }
    if eq.q.constant_term().is_zero() {
        failed.push("Q(z,0) ≡ 0".to_string());
    }
    if let Some(res) = &eq.factored.residual {
        match res.degree() {
            0 => {}
            1 => notes.push("linear residual factor has root ".to_string() + &(-&res.coeff(0)).to_string()),
            2 => match res.split_quadratic() {
                Some((r1, r2)) => notes.push(format!("quadratic residual factor splits with roots {} and {}", r1, r2)),
                None => failed.push("Q not factored over rational functions: quadratic residual has non-square discriminant".into()),
            },
            d => failed.push(format!("Q not factored: residual factor of degree {} has no supplied roots", d)),
        }
    }
    let res = resultant_in_w(&eq.p, &eq.q);
    let by_roots = resultant_by_roots(&eq.p, &eq.factored);
    if res != by_roots {
        notes.push("warning: Sylvester and root-product resultants disagree".into());
    }
    if res.is_zero() {
        let shared: Vec<String> = shared_roots(&eq.p, &eq.factored).iter().map(|r| r.to_string()).collect();
        if shared.is_empty() {
            failed.push("P and Q have a common root".into());
        } else {
            failed.push(format!("P and Q have common roots: {}", shared.join(", ")));
        }
    }
    let deg = mohonko_degree(eq);
    if !failed.is_empty() {
        let mut v = Verdict::new(EqClass::LogDeriv, Outcome::HypothesisViolation(failed));
        v.notes = notes;
        v.degrees = Some(deg);
        return v;
    }
    let mut branches = Vec::new();
    if deg.deg_p == deg.deg_q + 1 && deg.deg_p <= 3 {
        branches.push(Outcome::ConsistentBranchA);
    }
    if deg.deg_r <= 1 {
        branches.push(Outcome::ConsistentBranchB);
    }
    let outcome = branches.first().cloned().unwrap_or(Outcome::ViolatesNecessaryCondition);
    if branches.len() == 2 {
        notes.push("both branches hold".into());
    }
    if outcome == Outcome::ViolatesNecessaryCondition {
        notes.push(format!(
            "deg P = {}, deg Q = {}, deg R = {}: any non-rational meromorphic solution has hyper-order at least 1",
            deg.deg_p, deg.deg_q, deg.deg_r
        ));
    }
    Verdict {
        class: EqClass::LogDeriv,
        outcome,
        branches,
        notes,
        degrees: Some(deg),
        params: None,
    }
}

/// Relative tolerance for recognizing `b/a = p pi i`.
const PI_TOL: f64 = 1e-12;
const PI_SEARCH: i64 = 64;

/// Integer `p` with `ratio ≈ p pi i`, if any.
pub fn detect_p_pi_i(ratio: &GaussRat) -> Option<i64> {
    let c = ratio.to_complex();
    let p = (c.im / PI).round() as i64;
    if p == 0 || p.abs() > PI_SEARCH {
        return None;
    }
    let target = num_complex::Complex64::new(0.0, p as f64 * PI);
    if (c - target).norm() <= PI_TOL * target.norm() {
        Some(p)
    } else {
        None
    }
}

/// Pure log-derivative class: `a` and `b` must both be constants.
pub fn pure_log_deriv_verdict(eq: &DelayDiffEq) -> Result<Verdict> {
    let DelayDiffEq::PureLogDeriv { a, b } = eq else {
        return Err(Error::Schema("expected a pure log-derivative equation".into()));
    };
    if a.is_zero() {
        return Err(Error::Hypothesis("a(z) ≡ 0 violates the hypothesis a ≢ 0".into()));
    }
    let a_const = a.is_constant_in_z();
    let b_const = b.is_constant_in_z();
    let mut v = if a_const && b_const {
        Verdict::new(EqClass::PureLogDeriv, Outcome::ConsistentBranchA)
    } else {
        let mut v = Verdict::new(EqClass::PureLogDeriv, Outcome::ViolatesNecessaryCondition);
        let which = match (a_const, b_const) {
            (false, false) => "a and b are not constant",
            (false, true) => "a is not constant",
            _ => "b is not constant",
        };
        v.notes.push(format!(
            "{}: no non-rational solution of hyper-order below 1 can have the required density of simple zeros",
            which
        ));
        v
    };
    let ratio = b / a;
    if ratio.is_constant_in_z() {
        if let Some(p) = ratio.as_constant().as_ref().and_then(detect_p_pi_i) {
            let k = match p {
                1 => String::new(),
                -1 => "-".to_string(),
                _ => p.to_string(),
            };
            v.notes.push(format!(
                "b = {k}πi·a numerically: the exponential family w = C exp({k}πiz) exists; it has no zeros and evades the zero-density hypothesis"
            ));
        }
    }
    Ok(v)
}

/// Inverse-square class: `c ≡ 0`, `a = lambda + mu z` and `b = nu a - mu`.
pub fn inverse_square_verdict(eq: &DelayDiffEq) -> Result<Verdict> {
    let DelayDiffEq::InverseSquare { a, b, c } = eq else {
        return Err(Error::Schema("expected an inverse-square equation".into()));
    };
    if a.is_zero() {
        return Err(Error::Hypothesis("a(z) ≡ 0 violates the hypothesis a ≢ 0".into()));
    }
    let violate = |msg: &str| {
        let mut v = Verdict::new(EqClass::InverseSquare, Outcome::ViolatesNecessaryCondition);
        v.notes.push(msg.to_string());
        Ok(v)
    };
    if !c.is_zero() {
        return violate("c ≢ 0");
    }
    let d2 = &(&a.shift_int(2) - &(&RatFunc::from_int(2) * &a.shift_int(1))) + a;
    if !d2.is_zero() {
        return violate("a not affine: second difference a(z+2) - 2a(z+1) + a(z) ≢ 0");
    }
    let mu = &a.shift_int(1) - a;
    let lambda = a.eval_exact(&GaussRat::from_int(0));
    let nu = &(b + &mu) / a;
    if !nu.is_constant_in_z() {
        return violate("b - νa + μ ≢ 0 for every constant ν");
    }
    let mut v = Verdict::new(EqClass::InverseSquare, Outcome::ConsistentBranchA);
    match (lambda.as_constant(), mu.as_constant(), nu.as_constant()) {
        (Some(lambda), Some(mu), Some(nu)) => v.params = Some(W22Params { lambda, mu, nu }),
        _ => v.notes.push(format!("symbolic parameters: λ = {}, μ = {}, ν = {}", lambda, mu, nu)),
    }
    Ok(v)
}

/// `w(z+1) - w(z-1) = ((λ + μz) w' + (νλ + μ(νz - 1)) w)/w^2`.
pub fn build_w22(p: &W22Params) -> DelayDiffEq {
    let a = RatFunc::poly(&[p.lambda.clone(), p.mu.clone()]);
    let b = RatFunc::poly(&[&(&p.nu * &p.lambda) - &p.mu, &p.mu * &p.nu]);
    DelayDiffEq::InverseSquare { a, b, c: RatFunc::zero() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FactoredQ, WPoly};

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn two_root_eq(p: WPoly) -> LogDerivEq {
        let fq = FactoredQ::new(vec![(rf("z"), 1), (rf("2*z"), 1)], None).unwrap();
        match DelayDiffEq::log_deriv(rf("1"), p, fq, false).unwrap() {
            DelayDiffEq::LogDeriv(e) => e,
            _ => unreachable!(),
        }
    }

    #[test]
    fn branch_table() {
        let cubic = WPoly::new(vec![rf("1"), rf("0"), rf("0"), rf("1")]);
        assert_eq!(log_deriv_verdict(&two_root_eq(cubic)).outcome, Outcome::ConsistentBranchA);
        let quartic = WPoly::new(vec![rf("0"), rf("0"), rf("0"), rf("0"), rf("1")]);
        assert_eq!(
            log_deriv_verdict(&two_root_eq(quartic)).outcome,
            Outcome::ViolatesNecessaryCondition
        );
        let fq = FactoredQ::new(vec![], None).unwrap();
        let e = match DelayDiffEq::log_deriv(rf("1"), WPoly::new(vec![rf("z^2+1")]), fq, false).unwrap() {
            DelayDiffEq::LogDeriv(e) => e,
            _ => unreachable!(),
        };
        assert_eq!(log_deriv_verdict(&e).outcome, Outcome::ConsistentBranchB);
    }

    #[test]
    fn overlapping_branches_reported() {
        // deg P = 1, deg Q = 0: branch A (1 = 0 + 1) and branch B (deg R = 1)
        let fq = FactoredQ::new(vec![], None).unwrap();
        let e = match DelayDiffEq::log_deriv(rf("1"), WPoly::new(vec![rf("0"), rf("z")]), fq, false).unwrap() {
            DelayDiffEq::LogDeriv(e) => e,
            _ => unreachable!(),
        };
        let v = log_deriv_verdict(&e);
        assert_eq!(v.branches, vec![Outcome::ConsistentBranchA, Outcome::ConsistentBranchB]);
    }

    #[test]
    fn common_root_is_a_hypothesis_violation() {
        let p = WPoly::linear_root(&rf("z")).mul(&WPoly::linear_root(&rf("1")));
        let v = log_deriv_verdict(&two_root_eq(p));
        assert!(matches!(v.outcome, Outcome::HypothesisViolation(ref f) if f[0].contains("common roots")));
    }

    #[test]
    fn pure_class_examples() {
        let eq = DelayDiffEq::pure_log_deriv(rf("2"), rf("3")).unwrap();
        assert_eq!(pure_log_deriv_verdict(&eq).unwrap().outcome, Outcome::ConsistentBranchA);
        let eq = DelayDiffEq::pure_log_deriv(rf("z"), rf("0")).unwrap();
        assert_eq!(pure_log_deriv_verdict(&eq).unwrap().outcome, Outcome::ViolatesNecessaryCondition);
        // 355/113 approximates pi only to 1e-7, so no flag
        let eq = DelayDiffEq::pure_log_deriv(rf("1"), rf("355/113*i")).unwrap();
        assert!(pure_log_deriv_verdict(&eq).unwrap().notes.is_empty());
        let eq = DelayDiffEq::pure_log_deriv(rf("1"), rf("2*i*3141592653589793/1000000000000000")).unwrap();
        let v = pure_log_deriv_verdict(&eq).unwrap();
        assert!(v.notes[0].contains("exp(2πiz)"), "{:?}", v.notes);
    }

    #[test]
    fn inverse_square_examples() {
        let eq = DelayDiffEq::inverse_square(rf("1+2*z"), rf("1+6*z"), rf("0")).unwrap();
        let v = inverse_square_verdict(&eq).unwrap();
        let p = v.params.unwrap();
        assert_eq!((p.lambda, p.mu, p.nu), (1.into(), 2.into(), 3.into()));
        let eq = DelayDiffEq::inverse_square(rf("1"), rf("0"), rf("1")).unwrap();
        assert!(inverse_square_verdict(&eq).unwrap().notes[0].contains("c ≢ 0"));
        let eq = DelayDiffEq::inverse_square(rf("z^2"), rf("z"), rf("0")).unwrap();
        assert!(inverse_square_verdict(&eq).unwrap().notes[0].contains("not affine"));
    }

    #[test]
    fn w22_round_trip() {
        let p = W22Params {
            lambda: GaussRat::from_ratio(-3, 2),
            mu: GaussRat::i(),
            nu: GaussRat::from_int(5),
        };
        let v = inverse_square_verdict(&build_w22(&p)).unwrap();
        assert_eq!(v.params, Some(p));
    }
}
