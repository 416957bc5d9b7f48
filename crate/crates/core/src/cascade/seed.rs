use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{FieldElem, LaurentSeries, RatFunc, Sym};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum SeedKind {
    /// `w(zh + t) = alpha t^p`.
    ZeroOfW,
    /// `w(zh + t) = b(zh + t) + alpha t^p`.
    ZeroOfWMinusB(RatFunc),
    /// `w(zh + t) = alpha t^-p`.
    PoleOfW,
}

impl SeedKind {
    pub fn name(&self) -> &'static str {
        match self {
            SeedKind::ZeroOfW => "zero_of_w",
            SeedKind::ZeroOfWMinusB(_) => "zero_of_w_minus_b",
            SeedKind::PoleOfW => "pole_of_w",
        }
    }
}

/// Description of the initial window. Cheap to clone, so cascades can be
/// replayed at a larger truncation.
#[derive(Clone, Debug)]
pub struct Seed {
    pub kind: SeedKind,
    pub p: u32,
    /// Value of `w` at `zh - 1`.
    pub regular: FieldElem,
    /// Leading coefficient at `zh`.
    pub leading: FieldElem,
}

impl Seed {
    /// Seed with symbolic `K` and `alpha`.
    pub fn symbolic(kind: SeedKind, p: u32) -> Self {
        Seed {
            kind,
            p,
            regular: FieldElem::var(Sym::K),
            leading: FieldElem::var(Sym::Alpha),
        }
    }

    pub fn zero(p: u32) -> Self {
        Seed::symbolic(SeedKind::ZeroOfW, p)
    }

    pub fn pole(p: u32) -> Self {
        Seed::symbolic(SeedKind::PoleOfW, p)
    }
}

/// Series of `w` at `zh + j` for the offsets computed so far.
#[derive(Clone, Default)]
pub struct LocalData {
    pub window: BTreeMap<i64, LaurentSeries>,
}

impl LocalData {
    pub fn get(&self, j: i64) -> Option<&LaurentSeries> {
        self.window.get(&j)
    }

    pub fn insert(&mut self, s: LaurentSeries) {
        self.window.insert(s.offset(), s);
    }
}

/// Initial window `{-1: K, 0: local behaviour at zh}`.
pub fn seed_local_data(seed: &Seed) -> Result<LocalData> {
    if seed.p == 0 {
        return Err(Error::Hypothesis("seed order p must be positive".into()));
    }
    if seed.leading.is_zero() {
        return Err(Error::Hypothesis("seed leading coefficient must be nonzero".into()));
    }
    let p = seed.p as i64;
    let at0 = match &seed.kind {
        SeedKind::ZeroOfW => LaurentSeries::monomial(seed.leading.clone(), p),
        SeedKind::PoleOfW => LaurentSeries::monomial(seed.leading.clone(), -p),
        SeedKind::ZeroOfWMinusB(b) => LaurentSeries::taylor(b.as_field(), 0)?.add(&LaurentSeries::monomial(seed.leading.clone(), p)),
    };
    let mut d = LocalData::default();
    d.insert(LaurentSeries::constant(seed.regular.clone()).with_offset(-1));
    d.insert(at0.with_offset(0));
    Ok(d)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedSpec {
    pub kind: &'static str,
    pub p: u32,
    pub regular: String,
    pub leading: String,
}

impl From<&Seed> for SeedSpec {
    fn from(s: &Seed) -> Self {
        SeedSpec {
            kind: s.kind.name(),
            p: s.p,
            regular: s.regular.to_string(),
            leading: s.leading.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_windows() {
        let d = seed_local_data(&Seed::zero(1)).unwrap();
        assert_eq!(d.get(-1).unwrap().order(16), Some(0));
        assert_eq!(*d.get(-1).unwrap().coeff(0), FieldElem::var(Sym::K));
        assert_eq!(d.get(0).unwrap().order(16), Some(1));

        let d = seed_local_data(&Seed::pole(1)).unwrap();
        assert_eq!(d.get(0).unwrap().order(16), Some(-1));

        let seed = Seed::symbolic(SeedKind::ZeroOfWMinusB(RatFunc::z()), 2);
        let d = seed_local_data(&seed).unwrap();
        let w0 = d.get(0).unwrap();
        assert_eq!(*w0.coeff(0), FieldElem::var(Sym::ZHat));
        assert_eq!(*w0.coeff(1), FieldElem::one());
        assert_eq!(*w0.coeff(2), FieldElem::var(Sym::Alpha));
    }

    #[test]
    fn nonpositive_order_rejected() {
        assert!(seed_local_data(&Seed::zero(0)).is_err());
    }
}
