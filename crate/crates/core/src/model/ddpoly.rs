//! Delay-differential polynomials `sum b_l(z) prod w^(m)(z + c)^e`.

use std::collections::BTreeMap;

use super::equation::DelayDiffEq;
use crate::algebra::{GaussRat, RatFunc};

/// `(shift, derivative order)` identifying the factor `w^(m)(z + shift)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Slot {
    pub shift: GaussRat,
    pub deriv: u32,
}

impl Slot {
    pub fn new(shift: i64, deriv: u32) -> Self {
        Slot {
            shift: GaussRat::from_int(shift),
            deriv,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DDTerm {
    pub coeff: RatFunc,
    pub index: BTreeMap<Slot, u32>,
}

#[derive(Clone, Debug, Default)]
pub struct DDPolynomial {
    pub terms: Vec<DDTerm>,
}

impl DDPolynomial {
    pub fn new() -> Self {
        DDPolynomial::default()
    }

    pub fn push(&mut self, coeff: RatFunc, factors: &[(Slot, u32)]) {
        if coeff.is_zero() {
            return;
        }
        let mut index = BTreeMap::new();
        for (s, e) in factors {
            if *e > 0 {
                *index.entry(s.clone()).or_insert(0) += *e;
            }
        }
        self.terms.push(DDTerm { coeff, index });
    }

    /// Polynomial form of the equation with denominators cleared.
    pub fn cleared_form(eq: &DelayDiffEq) -> DDPolynomial {
        let w = Slot::new(0, 0);
        let wp = Slot::new(1, 0);
        let wm = Slot::new(-1, 0);
        let dw = Slot::new(0, 1);
        let one = RatFunc::one();
        let mut d = DDPolynomial::new();
        match eq {
            DelayDiffEq::PureLogDeriv { a, b } => {
                // w w(z+1) - w w(z-1) + a w' - b w
                d.push(one.clone(), &[(w.clone(), 1), (wp, 1)]);
                d.push(-&one, &[(w.clone(), 1), (wm, 1)]);
                d.push(a.clone(), &[(dw, 1)]);
                d.push(-b, &[(w, 1)]);
            }
            DelayDiffEq::LogDeriv(e) => {
                // (w(z+1) - w(z-1)) w Q + a w' Q - w P
                for (k, qk) in e.q.coeffs().iter().enumerate() {
                    let k = k as u32;
                    d.push(qk.clone(), &[(wp.clone(), 1), (w.clone(), k + 1)]);
                    d.push(-qk, &[(wm.clone(), 1), (w.clone(), k + 1)]);
                    d.push(&e.a * qk, &[(dw.clone(), 1), (w.clone(), k)]);
                }
                for (k, pk) in e.p.coeffs().iter().enumerate() {
                    d.push(-pk, &[(w.clone(), k as u32 + 1)]);
                }
            }
            DelayDiffEq::InverseSquare { a, b, c } => {
                // (w(z+1) - w(z-1) - c) w^2 - a w' - b w
                d.push(one.clone(), &[(wp, 1), (w.clone(), 2)]);
                d.push(-&one, &[(wm, 1), (w.clone(), 2)]);
                d.push(-c, &[(w.clone(), 2)]);
                d.push(-a, &[(dw, 1)]);
                d.push(-b, &[(w, 1)]);
            }
        }
        d
    }
}

/// Replaces every `w^(m)(z + c)` by the `m`-th derivative of the candidate shifted by `c`.
pub fn substitute_rational(ddp: &DDPolynomial, candidate: &RatFunc) -> RatFunc {
    let mut cache: BTreeMap<Slot, RatFunc> = BTreeMap::new();
    let mut acc = RatFunc::zero();
    for t in &ddp.terms {
        let mut prod = t.coeff.clone();
        for (slot, e) in &t.index {
            let v = cache
                .entry(slot.clone())
                .or_insert_with(|| {
                    let mut d = candidate.clone();
                    for _ in 0..slot.deriv {
                        d = d.derive();
                    }
                    d.shift(&slot.shift)
                })
                .clone();
            for _ in 0..*e {
                prod = &prod * &v;
            }
        }
        acc = &acc + &prod;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn symmetric_difference_of_square() {
        let mut d = DDPolynomial::new();
        d.push(RatFunc::one(), &[(Slot::new(1, 0), 1)]);
        d.push(rf("-1"), &[(Slot::new(-1, 0), 1)]);
        assert_eq!(substitute_rational(&d, &rf("z^2")), rf("4*z"));
    }

    #[test]
    fn constant_candidate_in_pure_class() {
        let eq = DelayDiffEq::pure_log_deriv(rf("z"), rf("z^2+1")).unwrap();
        let d = DDPolynomial::cleared_form(&eq);
        let r = substitute_rational(&d, &rf("3"));
        assert_eq!(r, rf("-3*(z^2+1)"));
    }
}
