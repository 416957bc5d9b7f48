mod common;

use std::time::Instant;

use delaycas::algebra::{FieldElem, RatFunc, Sym};
use delaycas::cascade::{gamma_of, run_cascade, Seed};
use delaycas::model::DelayDiffEq;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn leading_coefficients_follow_the_zero_sequence() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let t0 = Instant::now();
    for p in 1..=3u32 {
        for _ in 0..10 {
            let a = common::random_ratfunc(&mut rng);
            let b = common::random_ratfunc(&mut rng);
            let eq = DelayDiffEq::pure_log_deriv(a.clone(), b).unwrap();
            let pat = run_cascade(&eq, &Seed::zero(p), 3, 16).unwrap();
            let pf = FieldElem::from_int(p as i64);
            let c1 = pat.entries[0].coeff(-1).unwrap();
            let c2 = pat.entries[1].coeff(-1).unwrap();
            let c3 = pat.entries[2].coeff(-1).unwrap();
            assert_eq!(c1, -&(&pf * &a.at_zhat(0)), "a = {a}");
            assert_eq!(c2, a.at_zhat(1));
            assert_eq!(c3, &a.at_zhat(2) - &(&pf * &a.at_zhat(0)));
        }
    }
    eprintln!("zero sequence: {:?}", t0.elapsed());
}

#[test]
fn simple_pole_coefficient_matches_gamma() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t0 = Instant::now();
    let mut n = 0;
    while n < 10 {
        let a = common::random_ratfunc(&mut rng);
        let b = common::random_ratfunc(&mut rng);
        let Ok(g) = gamma_of(&a, &b) else { continue };
        let eq = DelayDiffEq::inverse_square(a.clone(), b.clone(), RatFunc::zero()).unwrap();
        let t = Instant::now();
        let pat = run_cascade(&eq, &Seed::zero(1), 3, 16).unwrap();
        let e3 = &pat.entries[2];
        let got = e3.normal_form(-1).unwrap();
        let expect = &g.at_zhat(0) / &FieldElem::var(Sym::Alpha);
        assert_eq!(got, expect, "a = {a}, b = {b}");
        eprintln!("case {n}: {:?} orders {:?}", t.elapsed(), pat.orders());
        n += 1;
    }
    eprintln!("gamma oracle: {:?}", t0.elapsed());
}
