//! Corpus schema and validation.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::RatFunc;
use crate::cascade::{Direction, Seed, SeedKind};
use crate::error::{Error, Result};
use crate::model::{DelayDiffEq, EqClass, FactoredQ, WPoly};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub schema_version: u32,
    pub entries: Vec<CorpusEntry>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QFactorSpec {
    pub root: String,
    #[serde(default = "one")]
    pub mult: u32,
}

fn one() -> u32 {
    1
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub id: String,
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    /// Coefficients of `P` in `w`, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<QFactorSpec>>,
    /// Unfactored part of `Q`, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_residual: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub assert_monic: bool,
    /// Expected classifier outcome, e.g. `ConsistentBranchA`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_outcome: Option<String>,
    #[serde(default)]
    pub analysis: Analysis,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Analysis {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cascades: Vec<CascadeRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elliptic: Option<EllipticRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponential: Option<ExponentialRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mkdv: Option<MkdvRequest>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nev: Vec<NevRequest>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeRequest {
    /// `zero`, `zero_minus_b` or `pole`.
    pub seed: String,
    #[serde(default = "one")]
    pub p: u32,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub backward: bool,
    /// Expected verdict, e.g. `ConfinedAt(3)` or `SimplePoleTail`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_orders: Option<Vec<i64>>,
}

fn default_steps() -> usize {
    4
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupRequest {
    #[serde(default = "one")]
    pub q: u32,
    #[serde(default = "three")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_orders: Option<Vec<i64>>,
}

fn three() -> usize {
    3
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EllipticRequest {
    pub g2: [f64; 2],
    pub g3: [f64; 2],
    pub omega: [f64; 2],
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default = "tol_elliptic")]
    pub tol: f64,
    /// Also run with `alpha^2` negated and require a residual above `1e-3`.
    #[serde(default)]
    pub control: bool,
}

fn hundred() -> usize {
    100
}
fn tol_elliptic() -> f64 {
    1e-8
}
fn tol_tight() -> f64 {
    1e-10
}
fn tol_mkdv() -> f64 {
    1e-12
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentialRequest {
    pub p: i64,
    pub c: [f64; 2],
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default = "tol_tight")]
    pub tol: f64,
    /// Also run with `b` shifted by 1 and require the check to fail.
    #[serde(default)]
    pub control: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MkdvRequest {
    #[serde(default = "hundred")]
    pub samples: usize,
    #[serde(default = "tol_mkdv")]
    pub tol: f64,
    #[serde(default)]
    pub control: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NevRequest {
    /// `elliptic_solution` (needs an `elliptic` request), `weierstrass`, `exponential` or `rational`.
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g2: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g3: Option<[f64; 2]>,
    /// `C` and `rho` of `C exp(rho z)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<Vec<([f64; 2], u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Vec<([f64; 2], u32)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    /// Constant coefficients of `R(w)`, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_poly: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub expect: NevExpect,
}

/// Closed intervals the measurements must fall in.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NevExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho2: Option<[f64; 2]>,
    /// `N_bar(r, 1/f) / T(r, f)` on the top half of the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_density: Option<[f64; 2]>,
    /// `T(r, R(f)) / T(r, f)` on the top half of the grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composition: Option<[f64; 2]>,
}

pub fn cx(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn field_err(id: &str, field: &str, e: Error) -> Error {
    Error::Schema(format!("entry '{}', field '{}': {}", id, field, e))
}

impl CorpusEntry {
    fn expr(&self, field: &str, v: &Option<String>) -> Result<RatFunc> {
        let s = v
            .as_ref()
            .ok_or_else(|| Error::Schema(format!("entry '{}': class {} requires field '{}'", self.id, self.class, field)))?;
        RatFunc::parse(s).map_err(|e| field_err(&self.id, field, e))
    }

    fn expr_list(&self, field: &str, v: &[String]) -> Result<Vec<RatFunc>> {
        v.iter()
            .enumerate()
            .map(|(i, s)| RatFunc::parse(s).map_err(|e| field_err(&self.id, &format!("{}[{}]", field, i), e)))
            .collect()
    }

    pub fn class(&self) -> Result<EqClass> {
        EqClass::from_name(&self.class).ok_or_else(|| {
            Error::Schema(format!(
                "entry '{}': unknown class '{}' (expected log-deriv, pure-log-deriv or inverse-square)",
                self.id, self.class
            ))
        })
    }

    fn forbid(&self, fields: &[(&str, bool)]) -> Result<()> {
        for (name, present) in fields {
            if *present {
                return Err(Error::Schema(format!(
                    "entry '{}': field '{}' does not apply to class {}",
                    self.id, name, self.class
                )));
            }
        }
        Ok(())
    }

    pub fn equation(&self) -> Result<DelayDiffEq> {
        let a = self.expr("a", &self.a)?;
        let wrap = |e: Error| match e {
            Error::Schema(_) => e,
            other => Error::Schema(format!("entry '{}': {}", self.id, other)),
        };
        match self.class()? {
            EqClass::PureLogDeriv => {
                self.forbid(&[("c", self.c.is_some()), ("p", self.p.is_some()), ("q", self.q.is_some())])?;
                DelayDiffEq::pure_log_deriv(a, self.expr("b", &self.b)?).map_err(wrap)
            }
            EqClass::InverseSquare => {
                self.forbid(&[("p", self.p.is_some()), ("q", self.q.is_some())])?;
                let c = match &self.c {
                    Some(_) => self.expr("c", &self.c)?,
                    None => RatFunc::zero(),
                };
                DelayDiffEq::inverse_square(a, self.expr("b", &self.b)?, c).map_err(wrap)
            }
            EqClass::LogDeriv => {
                self.forbid(&[("b", self.b.is_some()), ("c", self.c.is_some())])?;
                let p = self
                    .p
                    .as_ref()
                    .ok_or_else(|| Error::Schema(format!("entry '{}': class log-deriv requires field 'p'", self.id)))?;
                let p = WPoly::new(self.expr_list("p", p)?);
                let mut factors = Vec::new();
                for (i, f) in self.q.iter().flatten().enumerate() {
                    let root = RatFunc::parse(&f.root).map_err(|e| field_err(&self.id, &format!("q[{}].root", i), e))?;
                    factors.push((root, f.mult));
                }
                let residual = match &self.q_residual {
                    Some(r) => Some(WPoly::new(self.expr_list("q_residual", r)?)),
                    None => None,
                };
                let fq = FactoredQ::new(factors, residual).map_err(wrap)?;
                DelayDiffEq::log_deriv(a, p, fq, self.assert_monic).map_err(wrap)
            }
        }
    }
}

impl CascadeRequest {
    pub fn seed(&self, id: &str) -> Result<Seed> {
        let kind = match self.seed.as_str() {
            "zero" => SeedKind::ZeroOfW,
            "pole" => SeedKind::PoleOfW,
            "zero_minus_b" => {
                let b = self
                    .b
                    .as_ref()
                    .ok_or_else(|| Error::Schema(format!("entry '{}': seed zero_minus_b needs 'b'", id)))?;
                SeedKind::ZeroOfWMinusB(RatFunc::parse(b).map_err(|e| field_err(id, "cascades.b", e))?)
            }
            other => return Err(Error::Schema(format!("entry '{}': unknown seed '{}'", id, other))),
        };
        if self.p == 0 || self.steps == 0 {
            return Err(Error::Schema(format!("entry '{}': cascade p and steps must be positive", id)));
        }
        Ok(Seed::symbolic(kind, self.p))
    }

    pub fn direction(&self) -> Direction {
        if self.backward {
            Direction::Backward
        } else {
            Direction::Forward
        }
    }
}

/// A corpus whose entries have all been parsed into equations.
pub struct Validated {
    pub corpus: Corpus,
    pub equations: Vec<DelayDiffEq>,
}

pub fn parse_corpus(text: &str) -> Result<Validated> {
    let corpus: Corpus = serde_json::from_str(text).map_err(|e| Error::Schema(format!("corpus JSON: {}", e)))?;
    if corpus.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {} (expected {})",
            corpus.schema_version, SCHEMA_VERSION
        )));
    }
    let mut ids = BTreeSet::new();
    let mut equations = Vec::new();
    for e in &corpus.entries {
        if e.id.is_empty() {
            return Err(Error::Schema("entry with empty id".into()));
        }
        if !ids.insert(e.id.clone()) {
            return Err(Error::Schema(format!("duplicate entry id '{}'", e.id)));
        }
        equations.push(e.equation()?);
        for c in &e.analysis.cascades {
            c.seed(&e.id)?;
        }
        for n in &e.analysis.nev {
            if !["elliptic_solution", "weierstrass", "exponential", "rational"].contains(&n.model.as_str()) {
                return Err(Error::Schema(format!("entry '{}': unknown nev model '{}'", e.id, n.model)));
            }
            if n.model == "elliptic_solution" && e.analysis.elliptic.is_none() {
                return Err(Error::Schema(format!(
                    "entry '{}': nev model elliptic_solution needs an elliptic request",
                    e.id
                )));
            }
        }
    }
    Ok(Validated { corpus, equations })
}
