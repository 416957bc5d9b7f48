//! Running the requested analyses on a validated corpus and assembling reports.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::corpus::{cx, CorpusEntry, NevRequest, Validated};
use crate::analytic::{
    continuum_limit_w22, mkdv_identity_check, verify_elliptic_family, verify_exponential, ContinuumLimit, EllipticParams, FunctionModel,
    VerifierReport, Weierstrass,
};
use crate::cascade::engine::PatternJson;
use crate::cascade::{confinement_report, polynomial_blowup, run_cascade_dir, BlowupReport, ConfinementVerdict, VerdictKind};
use crate::classify::{classify, Outcome, Verdict};
use crate::error::{Error, Result};
use crate::model::DelayDiffEq;
use crate::nevanlinna::{
    characteristic_table, default_grid, growth_estimates, ratio_checks, GrowthEstimate, NevTable, QuadOptions, RatioReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Classify,
    Cascade,
    Verify,
    Nev,
    Limit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Cascade => "cascade",
            Command::Verify => "verify",
            Command::Nev => "nev",
            Command::Limit => "limit",
        }
    }

    /// Series truncation for cascades, or truncation in eps for the continuum limit.
    pub fn default_truncation(self) -> usize {
        match self {
            Command::Limit => 7,
            _ => crate::algebra::laurent::DEFAULT_TRUNCATION,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub truncation: usize,
    pub entry: Option<String>,
}

pub fn outcome_label(o: &Outcome) -> &'static str {
    match o {
        Outcome::ConsistentBranchA => "ConsistentBranchA",
        Outcome::ConsistentBranchB => "ConsistentBranchB",
        Outcome::ViolatesNecessaryCondition => "ViolatesNecessaryCondition",
        Outcome::HypothesisViolation(_) => "HypothesisViolation",
    }
}

pub fn verdict_label(k: &VerdictKind) -> String {
    match k {
        VerdictKind::ConfinedAt(n) => format!("ConfinedAt({})", n),
        VerdictKind::SimplePoleTail => "SimplePoleTail".into(),
        VerdictKind::BoundedPoleChain => "BoundedPoleChain".into(),
        VerdictKind::ExponentialOrderGrowth(d) => format!("ExponentialOrderGrowth({})", d),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CascadeReport {
    pub pattern: Option<PatternJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confinement: Option<ConfinementVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NevReport {
    pub model: String,
    pub table: NevTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthEstimate>,
    pub ratios: RatioReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cascades: Vec<CascadeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verifiers: Vec<VerifierReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nev: Vec<NevReport>,
    pub failures: Vec<String>,
    pub pass: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub limit: ContinuumLimit,
    pub eps5: String,
    pub certifies: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Command,
    pub seed: u64,
    pub truncation: usize,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitReport>,
    pub pass: bool,
}

fn in_range(v: f64, r: [f64; 2]) -> bool {
    v >= r[0] && v <= r[1]
}

fn run_cascades(entry: &CorpusEntry, eq: &DelayDiffEq, cfg: &RunConfig, rep: &mut EntryReport) {
    for req in &entry.analysis.cascades {
        let seed = match req.seed(&entry.id) {
            Ok(s) => s,
            Err(e) => {
                rep.failures.push(e.to_string());
                continue;
            }
        };
        match run_cascade_dir(eq, &seed, req.steps, cfg.truncation, req.direction()) {
            Ok(pat) => {
                let orders = pat.orders();
                if let Some(exp) = &req.expect_orders {
                    if &orders != exp {
                        rep.failures.push(format!("cascade orders {:?}, expected {:?}", orders, exp));
                    }
                }
                let conf = confinement_report(&pat, eq);
                let label = conf.as_ref().ok().map(|c| verdict_label(&c.kind));
                if let Some(exp) = &req.expect {
                    match &label {
                        Some(l) if l == exp => {}
                        Some(l) => rep.failures.push(format!("cascade verdict {}, expected {}", l, exp)),
                        None => rep.failures.push(format!("no cascade verdict, expected {}", exp)),
                    }
                }
                let error = match (&conf, &pat.stopped) {
                    (Err(e), _) => Some(e.to_string()),
                    (_, Some(s)) => Some(s.clone()),
                    _ => None,
                };
                rep.cascades.push(CascadeReport {
                    pattern: Some(pat.to_json()),
                    confinement: conf.ok(),
                    label,
                    error,
                });
            }
            Err(e) => {
                rep.failures.push(format!("cascade: {}", e));
                rep.cascades.push(CascadeReport {
                    pattern: None,
                    confinement: None,
                    label: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    if let Some(b) = &entry.analysis.blowup {
        match polynomial_blowup(eq, b.q, b.steps) {
            Ok(r) => {
                if let Some(exp) = &b.expect_orders {
                    if &r.orders != exp {
                        rep.failures.push(format!("blowup orders {:?}, expected {:?}", r.orders, exp));
                    }
                }
                rep.blowup = Some(r);
            }
            Err(e) => rep.failures.push(format!("blowup: {}", e)),
        }
    }
}

fn w22_lambda_nu(v: &Verdict) -> Option<(Complex64, Complex64, Complex64)> {
    let p = v.params.as_ref()?;
    Some((p.lambda.to_complex(), p.mu.to_complex(), p.nu.to_complex()))
}

fn elliptic_params(entry: &CorpusEntry, eq: &DelayDiffEq) -> Result<Option<EllipticParams>> {
    let Some(req) = &entry.analysis.elliptic else { return Ok(None) };
    let v = classify(eq)?;
    let (lambda, mu, nu) =
        w22_lambda_nu(&v).ok_or_else(|| Error::Hypothesis("elliptic family needs an equation with numeric lambda, mu, nu".into()))?;
    if mu.norm() != 0.0 || nu.norm() != 0.0 {
        return Err(Error::Hypothesis("elliptic family needs mu = nu = 0".into()));
    }
    EllipticParams::new(cx(req.g2), cx(req.g3), cx(req.omega), lambda).map(Some)
}

fn run_verifiers(entry: &CorpusEntry, eq: &DelayDiffEq, cfg: &RunConfig, rep: &mut EntryReport) {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let push = |rep: &mut EntryReport, r: Result<VerifierReport>, expect_pass: bool| match r {
        Ok(v) => {
            if v.pass != expect_pass {
                rep.failures.push(format!(
                    "{}: residual {:e} {} tolerance {:e}",
                    v.check,
                    v.max_residual,
                    if expect_pass { "above" } else { "within (control)" },
                    v.tol
                ));
            }
            rep.verifiers.push(v);
        }
        Err(e) => rep.failures.push(format!("verify: {}", e)),
    };
    if let Some(req) = &entry.analysis.elliptic {
        match elliptic_params(entry, eq) {
            Ok(Some(p)) => {
                push(rep, verify_elliptic_family(&p, req.samples, req.tol, cfg.seed), true);
                if req.control {
                    let flipped = p.clone().with_alpha(p.alpha * Complex64::new(0.0, 1.0));
                    let r = verify_elliptic_family(&flipped, req.samples, 1e-3, cfg.seed).map(|mut v| {
                        v.check = "elliptic_family_control".into();
                        v
                    });
                    push(rep, r, false);
                }
            }
            Ok(None) => {}
            Err(e) => rep.failures.push(format!("elliptic: {}", e)),
        }
    }
    if let Some(req) = &entry.analysis.exponential {
        let a = eq.a().clone();
        push(
            rep,
            verify_exponential(&a, req.p, cx(req.c), zero, req.samples, req.tol, cfg.seed),
            true,
        );
        if req.control {
            let r = verify_exponential(&a, req.p, cx(req.c), one, req.samples, req.tol, cfg.seed).map(|mut v| {
                v.check = "exponential_family_control".into();
                v
            });
            push(rep, r, false);
        }
    }
    if let Some(req) = &entry.analysis.mkdv {
        match classify(eq).map(|v| w22_lambda_nu(&v)) {
            Ok(Some((lambda, mu, nu))) if mu.norm() == 0.0 => {
                push(rep, mkdv_identity_check(lambda, nu, req.samples, zero, req.tol, cfg.seed), true);
                if req.control {
                    let r = mkdv_identity_check(lambda, nu, req.samples, one, req.tol, cfg.seed).map(|mut v| {
                        v.check = "mkdv_reduction_control".into();
                        v
                    });
                    push(rep, r, false);
                }
            }
            Ok(_) => rep
                .failures
                .push("mkdv: needs an equation with numeric lambda, nu and mu = 0".into()),
            Err(e) => rep.failures.push(format!("mkdv: {}", e)),
        }
    }
}

fn nev_model(entry: &CorpusEntry, eq: &DelayDiffEq, req: &NevRequest) -> Result<FunctionModel> {
    let need = |v: Option<[f64; 2]>, name: &str| {
        v.map(cx)
            .ok_or_else(|| Error::Schema(format!("nev model {} needs '{}'", req.model, name)))
    };
    match req.model.as_str() {
        "elliptic_solution" => {
            Ok(FunctionModel::elliptic_solution(&elliptic_params(entry, eq)?.ok_or_else(|| {
                Error::Schema("elliptic_solution needs an elliptic request".into())
            })?))
        }
        "weierstrass" => Ok(FunctionModel::weierstrass(Weierstrass::new(
            need(req.g2, "g2")?,
            need(req.g3, "g3")?,
        )?)),
        "exponential" => FunctionModel::exponential(need(req.c, "c")?, need(req.rho, "rho")?),
        "rational" => Ok(FunctionModel::Rational {
            c: need(req.c, "c")?,
            zeros: req.zeros.iter().flatten().map(|(z, m)| (cx(*z), *m)).collect(),
            poles: req.poles.iter().flatten().map(|(z, m)| (cx(*z), *m)).collect(),
        }),
        other => Err(Error::Schema(format!("unknown nev model '{}'", other))),
    }
}

fn run_nev(entry: &CorpusEntry, eq: &DelayDiffEq, rep: &mut EntryReport) {
    let opts = QuadOptions::default();
    for req in &entry.analysis.nev {
        let res = (|| -> Result<NevReport> {
            let f = nev_model(entry, eq, req)?;
            let grid = req.grid.clone().unwrap_or_else(|| default_grid(&f));
            let table = characteristic_table(&f, &grid, Some(Complex64::new(0.0, 0.0)), &opts)?;
            let growth = growth_estimates(&table).ok();
            let r_poly: Option<Vec<Complex64>> = req.r_poly.as_ref().map(|v| v.iter().copied().map(cx).collect());
            let eq_opt = matches!(eq, DelayDiffEq::LogDeriv(_)).then_some(eq);
            let ratios = ratio_checks(&f, eq_opt, r_poly.as_deref(), &grid, &opts)?;
            Ok(NevReport {
                model: req.model.clone(),
                table,
                growth,
                ratios,
            })
        })();
        match res {
            Ok(r) => {
                let e = &req.expect;
                let top = &r.ratios.rows[r.ratios.rows.len() / 2..];
                let mut check = |name: &str, range: Option<[f64; 2]>, vals: Vec<Option<f64>>| {
                    if let Some(range) = range {
                        for v in vals {
                            match v {
                                Some(v) if in_range(v, range) => {}
                                Some(v) => {
                                    rep.failures
                                        .push(format!("nev {}: {} = {} outside [{}, {}]", req.model, name, v, range[0], range[1]));
                                    break;
                                }
                                None => {
                                    rep.failures.push(format!("nev {}: {} unavailable", req.model, name));
                                    break;
                                }
                            }
                        }
                    }
                };
                check("rho", e.rho, vec![r.growth.as_ref().map(|g| g.rho.value)]);
                check("rho2", e.rho2, vec![r.growth.as_ref().map(|g| g.rho2.value)]);
                check("zero_density", e.zero_density, top.iter().map(|x| Some(x.zero_density)).collect());
                check("composition", e.composition, top.iter().map(|x| x.composition_ratio).collect());
                rep.nev.push(r);
            }
            Err(e) => rep.failures.push(format!("nev {}: {}", req.model, e)),
        }
    }
}

fn run_entry(entry: &CorpusEntry, eq: &DelayDiffEq, cfg: &RunConfig) -> EntryReport {
    let t0 = Instant::now();
    let mut rep = EntryReport {
        id: entry.id.clone(),
        class: entry.class.clone(),
        verdict: None,
        cascades: Vec::new(),
        blowup: None,
        verifiers: Vec::new(),
        nev: Vec::new(),
        failures: Vec::new(),
        pass: true,
        elapsed: Duration::ZERO,
    };
    match cfg.command {
        Command::Classify => match classify(eq) {
            Ok(v) => {
                if let Some(exp) = &entry.expect_outcome {
                    if outcome_label(&v.outcome) != exp {
                        rep.failures
                            .push(format!("outcome {}, expected {}", outcome_label(&v.outcome), exp));
                    }
                }
                rep.verdict = Some(v);
            }
            Err(e) => rep.failures.push(format!("classify: {}", e)),
        },
        Command::Cascade => run_cascades(entry, eq, cfg, &mut rep),
        Command::Verify => run_verifiers(entry, eq, cfg, &mut rep),
        Command::Nev => run_nev(entry, eq, &mut rep),
        Command::Limit => {}
    }
    rep.pass = rep.failures.is_empty();
    rep.elapsed = t0.elapsed();
    rep
}

pub fn run_limit(truncation: u32) -> Result<LimitReport> {
    let limit = continuum_limit_w22(truncation, None)?;
    let eps5 = limit.coeff(5);
    let pass = (0..5).all(|k| limit.coeff(k).is_zero()) && eps5 == crate::analytic::target_eps5();
    Ok(LimitReport {
        eps5: eps5.to_string(),
        certifies: "w = 1 - eps^2 y(eps z), lambda = 2, lambda nu = -eps^5/3: the residual starts at eps^5 with coefficient -1/3 (y''' - 12 y y' - 1), so y''' = 12 y y' + 1".into(),
        limit,
        pass,
    })
}

pub fn build_report(v: &Validated, cfg: &RunConfig, config_hash: String) -> Result<Report> {
    let selected: Vec<(&CorpusEntry, &DelayDiffEq)> = v
        .corpus
        .entries
        .iter()
        .zip(&v.equations)
        .filter(|(e, _)| cfg.entry.as_ref().is_none_or(|id| &e.id == id))
        .collect();
    if let Some(id) = &cfg.entry {
        if selected.is_empty() {
            return Err(Error::Schema(format!("no entry with id '{}'", id)));
        }
    }
    let (entries, limit) = if cfg.command == Command::Limit {
        (Vec::new(), Some(run_limit(cfg.truncation as u32)?))
    } else {
        (selected.par_iter().map(|(e, eq)| run_entry(e, eq, cfg)).collect::<Vec<_>>(), None)
    };
    let pass = entries.iter().all(|e| e.pass) && limit.as_ref().is_none_or(|l| l.pass);
    Ok(Report {
        tool: "delaycas",
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.command,
        seed: cfg.seed,
        truncation: cfg.truncation,
        config_hash,
        entries,
        limit,
        pass,
    })
}

pub fn render_text(r: &Report) -> String {
    let mut s = format!(
        "delaycas {} {} (seed {}, truncation {})\n",
        r.version,
        r.command.name(),
        r.seed,
        r.truncation
    );
    for e in &r.entries {
        s.push_str(&format!(
            "{} [{}] {} ({:.1?})\n",
            if e.pass { "PASS" } else { "FAIL" },
            e.class,
            e.id,
            e.elapsed
        ));
        if let Some(v) = &e.verdict {
            s.push_str(&format!("  outcome: {}\n", outcome_label(&v.outcome)));
            if v.branches.len() > 1 {
                s.push_str("  branches: A and B\n");
            }
            if let Outcome::HypothesisViolation(f) = &v.outcome {
                for x in f {
                    s.push_str(&format!("  hypothesis: {}\n", x));
                }
            }
            if let Some(p) = &v.params {
                s.push_str(&format!("  (lambda, mu, nu) = ({}, {}, {})\n", p.lambda, p.mu, p.nu));
            }
            if let Some(d) = &v.degrees {
                s.push_str(&format!("  deg P = {}, deg Q = {}, deg R = {}\n", d.deg_p, d.deg_q, d.deg_r));
            }
            for n in &v.notes {
                s.push_str(&format!("  note: {}\n", n));
            }
        }
        for c in &e.cascades {
            if let Some(p) = &c.pattern {
                let orders: Vec<String> = p.entries.iter().map(|x| format!("{}:{}", x.offset, x.order)).collect();
                s.push_str(&format!(
                    "  cascade {} p={} {:?}: orders [{}]\n",
                    p.seed.kind,
                    p.seed.p,
                    p.direction,
                    orders.join(", ")
                ));
            }
            if let Some(v) = &c.confinement {
                s.push_str(&format!("    verdict: {}\n", verdict_label(&v.kind)));
                for w in &v.witnesses {
                    s.push_str(&format!("    {} @ {}: {}\n", w.label, w.offset, w.value));
                }
            }
            if let Some(err) = &c.error {
                s.push_str(&format!("    note: {}\n", err));
            }
        }
        if let Some(b) = &e.blowup {
            s.push_str(&format!(
                "  blowup: degree {}, pole orders {:?}, geometric {}\n",
                b.degree, b.orders, b.geometric
            ));
        }
        for v in &e.verifiers {
            s.push_str(&format!(
                "  {}: max residual {:.3e} (tol {:e}, {} samples)\n",
                v.check, v.max_residual, v.tol, v.samples
            ));
        }
        for n in &e.nev {
            s.push_str(&format!("  nev {} ({} radii)", n.model, n.table.rows.len()));
            if let Some(g) = &n.growth {
                s.push_str(&format!(
                    ": rho = {:.4} ± {:.4}, rho2 = {:.4} ± {:.4}",
                    g.rho.value, g.rho.width, g.rho2.value, g.rho2.width
                ));
            }
            s.push('\n');
            if let Some(last) = n.ratios.rows.last() {
                s.push_str(&format!("    at r = {:.3}: N_bar(r,1/f)/T(r,f) = {:.4}", last.r, last.zero_density));
                if let Some(c) = last.composition_ratio {
                    s.push_str(&format!(", T(r,R(f))/T(r,f) = {:.4}", c));
                }
                s.push('\n');
            }
        }
        for f in &e.failures {
            s.push_str(&format!("  FAIL: {}\n", f));
        }
    }
    if let Some(l) = &r.limit {
        s.push_str(&format!(
            "{} continuum limit (truncation eps^{})\n",
            if l.pass { "PASS" } else { "FAIL" },
            l.limit.truncation
        ));
        for (k, c) in &l.limit.coefficients {
            s.push_str(&format!("  eps^{}: {}\n", k, c));
        }
        s.push_str(&format!("  eps^5 coefficient: {}\n  {}\n", l.eps5, l.certifies));
    }
    s.push_str(&format!("overall: {}\n", if r.pass { "PASS" } else { "FAIL" }));
    s
}
