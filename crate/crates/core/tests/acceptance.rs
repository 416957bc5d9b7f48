//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use delaycas::algebra::{FieldElem, RatFunc, Sym};
use delaycas::analytic::{
    continuum_limit_w22, mkdv_identity_check, target_eps5, verify_elliptic_family, verify_exponential, EllipticParams, FunctionModel,
    Weierstrass,
};
use delaycas::cascade::{confinement_report, gamma_of, polynomial_blowup, run_cascade, Seed, VerdictKind};
use delaycas::classify::{build_w22, classify, inverse_square_verdict, Outcome, W22Params};
use delaycas::cli::{parse_corpus, DEMO_CORPUS};
use delaycas::model::DelayDiffEq;
use delaycas::nevanlinna::{characteristic_table, default_grid, growth_estimates, ratio_checks, QuadOptions};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pseq_coefficients() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in 1..=3u32 {
        for _ in 0..10 {
            let a = common::random_ratfunc(&mut rng);
            let b = common::random_ratfunc(&mut rng);
            let eq = DelayDiffEq::pure_log_deriv(a.clone(), b).map_err(|e| e.to_string())?;
            let pat = run_cascade(&eq, &Seed::zero(p), 3, 16).map_err(|e| e.to_string())?;
            let pf = FieldElem::from_int(p as i64);
            let got: Vec<FieldElem> = (0..3).map(|i| pat.entries[i].coeff(-1).unwrap_or_else(FieldElem::zero)).collect();
            let want = [-&(&pf * &a.at_zhat(0)), a.at_zhat(1), &a.at_zhat(2) - &(&pf * &a.at_zhat(0))];
            ensure(got[..] == want[..], || format!("p = {p}, a = {a}"))?;
        }
    }
    Ok("30 cascades exact".into())
}

fn gamma_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut n = 0;
    while n < 10 {
        let a = common::random_ratfunc(&mut rng);
        let b = common::random_ratfunc(&mut rng);
        let Ok(g) = gamma_of(&a, &b) else { continue };
        let eq = DelayDiffEq::inverse_square(a.clone(), b.clone(), RatFunc::zero()).map_err(|e| e.to_string())?;
        let pat = run_cascade(&eq, &Seed::zero(1), 3, 16).map_err(|e| e.to_string())?;
        let got = pat.entries[2].normal_form(-1).unwrap_or_else(FieldElem::zero);
        let want = &g.at_zhat(0) / &FieldElem::var(Sym::Alpha);
        ensure(got == want, || format!("a = {a}, b = {b}: {got} vs {want}"))?;
        n += 1;
    }
    Ok("10 instances exact".into())
}

fn w22_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..25 {
        let params = W22Params {
            lambda: common::nonzero_rat(&mut rng),
            mu: common::small_rat(&mut rng),
            nu: common::small_rat(&mut rng),
        };
        let eq = build_w22(&params);
        let v = inverse_square_verdict(&eq).map_err(|e| e.to_string())?;
        ensure(v.params.as_ref() == Some(&params), || {
            format!("{:?} recovered as {:?}", params, v.params)
        })?;
        let pat = run_cascade(&eq, &Seed::zero(1), 4, 16).map_err(|e| e.to_string())?;
        let conf = confinement_report(&pat, &eq).map_err(|e| e.to_string())?;
        ensure(conf.kind == VerdictKind::ConfinedAt(3), || format!("{:?}: {:?}", params, conf.kind))?;
        for label in ["second-difference resonance", "gamma"] {
            let w = conf.witnesses.iter().find(|w| w.label == label);
            ensure(w.is_some_and(|w| w.value.is_zero()), || {
                format!("{:?}: witness {label} {:?}", params, w)
            })?;
        }
    }
    let a = RatFunc::from_int(1);
    let b = RatFunc::z();
    let eq = DelayDiffEq::inverse_square(a.clone(), b.clone(), RatFunc::zero()).map_err(|e| e.to_string())?;
    let pat = run_cascade(&eq, &Seed::zero(1), 4, 16).map_err(|e| e.to_string())?;
    let conf = confinement_report(&pat, &eq).map_err(|e| e.to_string())?;
    ensure(conf.kind == VerdictKind::SimplePoleTail, || format!("perturbed: {:?}", conf.kind))?;
    ensure(conf.witnesses[0].value == FieldElem::from_int(-2), || {
        format!("gamma witness {}", conf.witnesses[0].value)
    })?;
    let g = gamma_of(&a, &b).map_err(|e| e.to_string())?.at_zhat(0);
    let alpha = FieldElem::var(Sym::Alpha);
    let want = -&(&(&alpha * &a.at_zhat(3)) / &g);
    let tail = conf.witnesses.iter().find(|w| w.label == "terminal value" && w.offset == 4);
    ensure(tail.is_some_and(|w| w.value == want), || {
        format!("terminal value {:?}, expected {want}", tail)
    })?;
    Ok(format!("25 parameter sets ConfinedAt(3); perturbed tail value {want}"))
}

fn blowup() -> Check {
    let a = RatFunc::from_int(1);
    let p = delaycas::model::WPoly::new(vec![RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), a.clone()]);
    let q = delaycas::model::FactoredQ::new(vec![], None).map_err(|e| e.to_string())?;
    let eq = DelayDiffEq::log_deriv(a, p, q, true).map_err(|e| e.to_string())?;
    let r = polynomial_blowup(&eq, 1, 3).map_err(|e| e.to_string())?;
    ensure(r.orders == [4, 16, 64], || format!("orders {:?}", r.orders))?;
    Ok(format!("pole orders {:?}", r.orders))
}

fn branch_table() -> Check {
    let v = parse_corpus(DEMO_CORPUS).map_err(|e| e.to_string())?;
    let mut got = Vec::new();
    for id in ["branch-a", "branch-violates", "branch-b"] {
        let i = v.corpus.entries.iter().position(|e| e.id == id).ok_or(format!("{id} missing"))?;
        got.push(classify(&v.equations[i]).map_err(|e| e.to_string())?.outcome);
    }
    let want = [
        Outcome::ConsistentBranchA,
        Outcome::ViolatesNecessaryCondition,
        Outcome::ConsistentBranchB,
    ];
    ensure(got[..] == want[..], || format!("{:?}", got))?;
    Ok("(BranchA, Violates, BranchB)".into())
}

fn elliptic() -> Check {
    let p = EllipticParams::new(c(2.0, 0.0), c(1.0, 0.0), c(0.3, 0.2), c(1.0, 0.0)).map_err(|e| e.to_string())?;
    let good = verify_elliptic_family(&p, 100, 1e-8, 1).map_err(|e| e.to_string())?;
    let flipped = p.clone().with_alpha(p.alpha * Complex64::i());
    let bad = verify_elliptic_family(&flipped, 100, 1e-8, 1).map_err(|e| e.to_string())?;
    ensure(good.pass, || format!("residual {:.3e}", good.max_residual))?;
    ensure(bad.max_residual > 1e-3, || format!("control residual {:.3e}", bad.max_residual))?;
    Ok(format!("residual {:.3e}, control {:.3e}", good.max_residual, bad.max_residual))
}

fn exponential() -> Check {
    let mut worst: f64 = 0.0;
    for (a, p) in [("1", 1), ("z^2 + 1", 2), ("1/(z - 3)", -1)] {
        let a = RatFunc::parse(a).map_err(|e| e.to_string())?;
        let r = verify_exponential(&a, p, c(3.0, -2.0), c(0.0, 0.0), 100, 1e-10, 2).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("a = {a}, p = {p}: {:.3e}", r.max_residual))?;
        worst = worst.max(r.max_residual);
        let bad = verify_exponential(&a, p, c(3.0, -2.0), c(1e-3, 0.0), 100, 1e-10, 2).map_err(|e| e.to_string())?;
        ensure(!bad.pass, || format!("perturbed b passed for a = {a}"))?;
    }
    Ok(format!("max residual {:.3e}; perturbed b fails", worst))
}

fn continuum() -> Check {
    let l = continuum_limit_w22(7, None).map_err(|e| e.to_string())?;
    ensure(l.coeff(3).is_zero(), || format!("eps^3: {}", l.coeff(3)))?;
    ensure(l.coeff(5) == target_eps5(), || format!("eps^5: {}", l.coeff(5)))?;
    Ok(format!("eps^3 = 0, eps^5 = {}", l.coeff(5)))
}

fn mkdv() -> Check {
    let r = mkdv_identity_check(c(2.0, 0.0), c(-1.0 / 6.0, 0.0), 100, c(0.0, 0.0), 1e-12, 3).map_err(|e| e.to_string())?;
    ensure(r.pass, || format!("residual {:.3e}", r.max_residual))?;
    Ok(format!("residual {:.3e}", r.max_residual))
}

fn nevanlinna() -> Check {
    let opts = QuadOptions::default();
    let p = EllipticParams::new(c(2.0, 0.0), c(1.0, 0.0), c(0.3, 0.2), c(1.0, 0.0)).map_err(|e| e.to_string())?;
    let ell = FunctionModel::elliptic_solution(&p);
    let grid = default_grid(&ell);
    let g = growth_estimates(&characteristic_table(&ell, &grid, None, &opts).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure((1.85..=2.15).contains(&g.rho.value), || format!("elliptic rho {:?}", g.rho))?;
    let rep = ratio_checks(&ell, None, None, &grid, &opts).map_err(|e| e.to_string())?;
    let top = &rep.rows[rep.rows.len() / 2..];
    let (zmin, zmax) = top
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), r| (lo.min(r.zero_density), hi.max(r.zero_density)));
    ensure(zmin >= 0.8 && zmax <= 1.1, || format!("zero density in [{zmin}, {zmax}]"))?;

    let ex = FunctionModel::exponential(c(1.0, 0.0), c(0.0, PI)).map_err(|e| e.to_string())?;
    let ge = growth_estimates(&characteristic_table(&ex, &default_grid(&ex), None, &opts).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure((0.9..=1.1).contains(&ge.rho.value), || format!("exp rho {:?}", ge.rho))?;
    ensure(ge.rho2.value.abs() <= 0.15, || format!("exp rho2 {:?}", ge.rho2))?;

    let wp = FunctionModel::weierstrass(Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).map_err(|e| e.to_string())?);
    let sq = [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let wgrid = default_grid(&wp);
    let rr = ratio_checks(&wp, None, Some(&sq), &wgrid, &opts).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = rr.rows[rr.rows.len() / 2..].iter().filter_map(|r| r.composition_ratio).collect();
    ensure(!ratios.is_empty() && ratios.iter().all(|q| (1.8..=2.2).contains(q)), || {
        format!("T(wp^2)/T(wp) {:?}", ratios)
    })?;
    Ok(format!(
        "elliptic rho {:.4}, zero density [{:.3}, {:.3}], exp rho {:.4} rho2 {:.4}, wp^2 ratio ~{:.4}",
        g.rho.value,
        zmin,
        zmax,
        ge.rho.value,
        ge.rho2.value,
        ratios[ratios.len() - 1]
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut digests = Vec::new();
    for cmd in ["classify", "cascade", "verify", "nev", "limit"] {
        let mut runs = Vec::new();
        for k in 0..2 {
            let path = dir.path().join(format!("{cmd}-{k}.json"));
            let code = delaycas::cli::run(["delaycas", cmd, "--format", "json", "--out", path.to_str().unwrap()]);
            ensure(code == 0, || format!("{cmd} exited {code}"))?;
            runs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(runs[0] == runs[1], || format!("{cmd} reports differ"))?;
        digests.push(runs[0].len());
    }
    Ok(format!("5 commands byte-identical ({} bytes)", digests.iter().sum::<usize>()))
}

fn main() {
    // the standard harness passes flags such as --nocapture; none apply here
    let criteria: [Criterion; 11] = [
        ("zero-sequence leading coefficients", pseq_coefficients, Duration::from_secs(10)),
        ("gamma oracle", gamma_oracle, Duration::from_secs(30)),
        ("inverse-square round trip and confinement", w22_round_trip, Duration::MAX),
        ("polynomial blowup", blowup, Duration::MAX),
        ("log-derivative branch table", branch_table, Duration::MAX),
        ("elliptic family", elliptic, Duration::from_secs(5)),
        ("exponential family", exponential, Duration::from_secs(1)),
        ("continuum limit", continuum, Duration::from_secs(1)),
        ("mKdV reduction", mkdv, Duration::from_secs(1)),
        ("Nevanlinna measurements", nevanlinna, Duration::from_secs(60)),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let dt = t.elapsed();
        let res = match res {
            Ok(s) if dt > *budget => Err(format!("{s}; over budget {:?}", budget)),
            r => r,
        };
        match res {
            Ok(s) => println!("PASS {:>2} {name}: {s} [{:.2?}]", i + 1, dt),
            Err(s) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {s} [{:.2?}]", i + 1, dt);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
