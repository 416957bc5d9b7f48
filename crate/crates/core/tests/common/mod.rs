#![allow(dead_code)]

use delaycas::algebra::{FieldElem, GaussRat, RatFunc};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_rat(rng: &mut ChaCha8Rng) -> GaussRat {
    let n = rng.gen_range(-6i64..=6);
    let d = rng.gen_range(1i64..=4);
    GaussRat::from_ratio(n, d)
}

pub fn nonzero_rat(rng: &mut ChaCha8Rng) -> GaussRat {
    loop {
        let r = small_rat(rng);
        if r != GaussRat::from_int(0) {
            return r;
        }
    }
}

/// Random polynomial in `z` of degree exactly `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, deg: usize) -> RatFunc {
    let mut c: Vec<GaussRat> = (0..deg).map(|_| small_rat(rng)).collect();
    c.push(nonzero_rat(rng));
    RatFunc::poly(&c)
}

/// Random nonconstant rational function with numerator and denominator degree at most 3.
pub fn random_ratfunc(rng: &mut ChaCha8Rng) -> RatFunc {
    loop {
        let dn = rng.gen_range(0..=3);
        let dd = rng.gen_range(0..=3);
        let num = random_poly(rng, dn);
        let den = random_poly(rng, dd);
        let r = &num / &den;
        if !r.is_constant_in_z() {
            return r;
        }
    }
}

pub fn field(s: &str) -> FieldElem {
    delaycas::algebra::parse::parse_field(s).unwrap()
}
