//! Laurent series in the local variable `t = z - zh`, evaluated on demand.
//!
//! A series is a node in an expression DAG. Coefficients are exact
//! `FieldElem`s computed lazily and memoized, so asking for the leading term of
//! a deep cascade only touches the coefficients that actually feed it. Every
//! node carries a lower bound `val` on its order; the exact order is found by
//! scanning at most `truncation` coefficients, and a scan that finds nothing
//! is reported as uncertified instead of being guessed.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;

use super::field::FieldElem;
use super::gauss::GaussRat;
use super::mpoly::{MPoly, Sym};
use crate::error::{Error, Result};

/// Default number of coefficients scanned when certifying an order.
pub const DEFAULT_TRUNCATION: usize = 16;
/// Upper limit for adaptive truncation growth.
pub const MAX_TRUNCATION: usize = 128;

enum Kind {
    Terms(Vec<FieldElem>),
    Add(LaurentSeries, LaurentSeries),
    Sub(LaurentSeries, LaurentSeries),
    Neg(LaurentSeries),
    Scale(FieldElem, LaurentSeries),
    Mul(LaurentSeries, LaurentSeries),
    Inv { s: LaurentSeries, ord: i64, lead_inv: FieldElem },
    Deriv(LaurentSeries),
}

struct Node {
    kind: Kind,
    val: i64,
    cache: RefCell<Vec<Rc<FieldElem>>>,
}

/// Handle to a lazily evaluated series at the lattice point `zh + offset`.
#[derive(Clone)]
pub struct LaurentSeries {
    node: Rc<Node>,
    offset: i64,
}

impl LaurentSeries {
    fn make(kind: Kind, val: i64, offset: i64) -> Self {
        LaurentSeries {
            node: Rc::new(Node {
                kind,
                val,
                cache: RefCell::new(Vec::new()),
            }),
            offset,
        }
    }

    /// Finite series `sum c_k t^(val + k)`; all later coefficients are zero.
    pub fn from_terms(val: i64, coeffs: Vec<FieldElem>) -> Self {
        let skip = coeffs.iter().take_while(|c| c.is_zero()).count();
        let coeffs: Vec<FieldElem> = coeffs.into_iter().skip(skip).collect();
        let val = val + skip as i64;
        LaurentSeries::make(Kind::Terms(coeffs), val, 0)
    }

    pub fn zero() -> Self {
        LaurentSeries::from_terms(0, Vec::new())
    }

    pub fn constant(c: FieldElem) -> Self {
        LaurentSeries::from_terms(0, vec![c])
    }

    /// `c t^k`.
    pub fn monomial(c: FieldElem, k: i64) -> Self {
        LaurentSeries::from_terms(k, vec![c])
    }

    /// Taylor expansion of a polynomial in `z` at `z = zh + j`.
    pub fn taylor_poly(p: &MPoly, j: i64) -> Self {
        let at = p.substitute(Sym::Z, &(&MPoly::var(Sym::ZHat) + &MPoly::from_int(j)));
        let deg = at.degree_in(Sym::ZHat) as usize;
        let mut coeffs = Vec::with_capacity(deg + 1);
        let mut d = at;
        let mut fact = GaussRat::from_int(1);
        for k in 0..=deg {
            if k > 0 {
                d = d.derivative(Sym::ZHat);
                fact = &fact * &GaussRat::from_int(k as i64);
            }
            coeffs.push(FieldElem::from_poly(d.scale(&fact.inv().expect("nonzero"))));
        }
        LaurentSeries::from_terms(0, coeffs)
    }

    /// Taylor expansion of an element of the coefficient field at `z = zh + j`.
    /// The denominator atoms are expanded and inverted one at a time so the
    /// result keeps their factorization.
    pub fn taylor(r: &FieldElem, j: i64) -> Result<Self> {
        let mut out = LaurentSeries::taylor_poly(r.numer(), j);
        for (atom, e) in r.denom().atoms() {
            let inv = LaurentSeries::taylor_poly(atom, j).inv(DEFAULT_TRUNCATION)?;
            for _ in 0..e {
                out = out.mul(&inv);
            }
        }
        Ok(out.with_offset(j))
    }

    pub fn with_offset(mut self, offset: i64) -> Self {
        self.offset = offset;
        self
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Structural lower bound on the order.
    pub fn val(&self) -> i64 {
        self.node.val
    }

    /// Coefficient of `t^n`.
    pub fn coeff(&self, n: i64) -> Rc<FieldElem> {
        let val = self.node.val;
        if n < val {
            return Rc::new(FieldElem::zero());
        }
        if let Kind::Terms(c) = &self.node.kind {
            return Rc::new(c.get((n - val) as usize).cloned().unwrap_or_else(FieldElem::zero));
        }
        let idx = (n - val) as usize;
        loop {
            let have = self.node.cache.borrow().len();
            if have > idx {
                break;
            }
            let next = self.compute(val + have as i64, have);
            self.node.cache.borrow_mut().push(Rc::new(next));
        }
        self.node.cache.borrow()[idx].clone()
    }

    fn compute(&self, n: i64, idx: usize) -> FieldElem {
        match &self.node.kind {
            Kind::Terms(_) => unreachable!(),
            Kind::Add(a, b) => &*a.coeff(n) + &*b.coeff(n),
            Kind::Sub(a, b) => &*a.coeff(n) - &*b.coeff(n),
            Kind::Neg(a) => -&*a.coeff(n),
            Kind::Scale(f, a) => {
                let c = a.coeff(n);
                if c.is_zero() {
                    FieldElem::zero()
                } else {
                    f * &*c
                }
            }
            Kind::Mul(a, b) => {
                let mut acc = FieldElem::zero();
                let (va, vb) = (a.val(), b.val());
                let mut k = va;
                while k <= n - vb {
                    let x = a.coeff(k);
                    if !x.is_zero() {
                        let y = b.coeff(n - k);
                        if !y.is_zero() {
                            acc = &acc + &(&*x * &*y);
                        }
                    }
                    k += 1;
                }
                acc
            }
            Kind::Inv { s, ord, lead_inv } => {
                if idx == 0 {
                    return lead_inv.clone();
                }
                let cache = self.node.cache.borrow();
                let mut acc = FieldElem::zero();
                for k in 1..=idx {
                    let c = s.coeff(ord + k as i64);
                    if !c.is_zero() {
                        let d = &cache[idx - k];
                        if !d.is_zero() {
                            acc = &acc + &(&*c * &**d);
                        }
                    }
                }
                if acc.is_zero() {
                    acc
                } else {
                    -&(&acc * lead_inv)
                }
            }
            Kind::Deriv(a) => {
                let c = a.coeff(n + 1);
                if c.is_zero() || n + 1 == 0 {
                    FieldElem::zero()
                } else {
                    c.scale(&GaussRat::from_int(n + 1))
                }
            }
        }
    }

    /// Exact order, certified by a nonzero coefficient within `truncation`
    /// coefficients of the structural bound. `None` means zero to truncation.
    pub fn order(&self, truncation: usize) -> Option<i64> {
        let v = self.val();
        if let Kind::Terms(c) = &self.node.kind {
            return if c.is_empty() { None } else { Some(v) };
        }
        (v..v + truncation as i64).find(|&n| !self.coeff(n).is_zero())
    }

    pub fn certified_order(&self, truncation: usize) -> Result<i64> {
        self.order(truncation).ok_or(Error::OrderUncertified {
            offset: self.offset,
            truncation,
        })
    }

    /// The first nonzero coefficient together with its exponent.
    pub fn leading(&self, truncation: usize) -> Option<(i64, FieldElem)> {
        let n = self.order(truncation)?;
        Some((n, (*self.coeff(n)).clone()))
    }

    /// Coefficients of `t^from .. t^(from + count)`.
    pub fn window(&self, from: i64, count: usize) -> Vec<FieldElem> {
        (0..count as i64).map(|k| (*self.coeff(from + k)).clone()).collect()
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        let v = self.val().min(other.val());
        LaurentSeries::make(Kind::Add(self.clone(), other.clone()), v, self.offset)
    }

    pub fn sub(&self, other: &LaurentSeries) -> LaurentSeries {
        let v = self.val().min(other.val());
        LaurentSeries::make(Kind::Sub(self.clone(), other.clone()), v, self.offset)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries::make(Kind::Neg(self.clone()), self.val(), self.offset)
    }

    pub fn scale(&self, f: &FieldElem) -> LaurentSeries {
        if f.is_zero() {
            return LaurentSeries::zero().with_offset(self.offset);
        }
        LaurentSeries::make(Kind::Scale(f.clone(), self.clone()), self.val(), self.offset)
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        LaurentSeries::make(Kind::Mul(self.clone(), other.clone()), self.val() + other.val(), self.offset)
    }

    pub fn pow(&self, e: u32) -> LaurentSeries {
        let mut acc = LaurentSeries::constant(FieldElem::one()).with_offset(self.offset);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1/S`. Fails when no nonzero coefficient is found within `truncation`.
    pub fn inv(&self, truncation: usize) -> Result<LaurentSeries> {
        let (ord, lead) = self.leading(truncation).ok_or(Error::IndeterminateComposition {
            offset: self.offset,
            truncation,
        })?;
        let lead_inv = lead.inv().expect("leading coefficient is nonzero");
        Ok(LaurentSeries::make(
            Kind::Inv {
                s: self.clone(),
                ord,
                lead_inv,
            },
            -ord,
            self.offset,
        ))
    }

    pub fn div(&self, other: &LaurentSeries, truncation: usize) -> Result<LaurentSeries> {
        Ok(self.mul(&other.inv(truncation)?))
    }

    /// Formal derivative in `t`.
    pub fn derivative(&self) -> LaurentSeries {
        LaurentSeries::make(Kind::Deriv(self.clone()), self.val() - 1, self.offset)
    }

    /// Materializes `count` coefficients starting at the certified order.
    pub fn snapshot(&self, truncation: usize, count: usize) -> Option<SeriesWindow> {
        let order = self.order(truncation)?;
        Some(SeriesWindow {
            offset: self.offset,
            order,
            coeffs: self.window(order, count),
            truncation,
        })
    }
}

/// `S'/S`; the result has order -1 with residue equal to the order of `S`
/// whenever that order is nonzero.
pub fn ls_log_derivative(s: &LaurentSeries, truncation: usize) -> Result<LaurentSeries> {
    if s.order(truncation).is_none() {
        return Err(Error::ZeroSeries);
    }
    Ok(s.derivative().mul(&s.inv(truncation)?))
}

/// Evaluates a polynomial in `w` with coefficients in the field at `S` by Horner's rule.
/// `coeffs` are indexed by the power of `w` and taken at `z = zh + j`.
pub fn ls_compose_poly(coeffs: &[FieldElem], s: &LaurentSeries, j: i64) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::zero().with_offset(j);
    for c in coeffs.iter().rev() {
        acc = acc.mul(s).add(&LaurentSeries::taylor(c, j)?);
    }
    Ok(acc.with_offset(j))
}

/// `R(zh + j + t, S(t))` for `R = num(w)/den(w)`.
pub fn ls_compose_rational(num: &[FieldElem], den: &[FieldElem], s: &LaurentSeries, j: i64, truncation: usize) -> Result<LaurentSeries> {
    let n = ls_compose_poly(num, s, j)?;
    let d = ls_compose_poly(den, s, j)?;
    Ok(n.div(&d, truncation)?.with_offset(j))
}

/// A materialized piece of a series: `coeffs[k]` multiplies `t^(order + k)`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesWindow {
    pub offset: i64,
    pub order: i64,
    #[serde(serialize_with = "ser_coeffs")]
    pub coeffs: Vec<FieldElem>,
    pub truncation: usize,
}

fn ser_coeffs<S: serde::Serializer>(c: &[FieldElem], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(c.iter().map(|f| f.to_string()))
}

impl fmt::Display for SeriesWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.order + k as i64;
            match e {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, e)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order + self.coeffs.len() as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> FieldElem {
        FieldElem::var(Sym::Alpha)
    }

    #[test]
    fn log_derivative_of_monomials() {
        for p in 1..=3 {
            let s = LaurentSeries::monomial(alpha(), p);
            let l = ls_log_derivative(&s, DEFAULT_TRUNCATION).unwrap();
            assert_eq!(l.order(DEFAULT_TRUNCATION), Some(-1));
            assert_eq!(*l.coeff(-1), FieldElem::from_int(p));
            assert!(l.order(DEFAULT_TRUNCATION).is_some());
            assert!(l.coeff(0).is_zero());
        }
    }

    #[test]
    fn log_derivative_of_regular_series() {
        let k = FieldElem::var(Sym::K);
        let beta = FieldElem::var(Sym::Lambda);
        let s = LaurentSeries::from_terms(0, vec![k.clone(), beta.clone()]);
        let l = ls_log_derivative(&s, DEFAULT_TRUNCATION).unwrap();
        assert_eq!(l.order(DEFAULT_TRUNCATION), Some(0));
        assert_eq!(*l.coeff(0), &beta / &k);
    }

    #[test]
    fn log_derivative_of_zero_fails() {
        let err = ls_log_derivative(&LaurentSeries::zero(), 16).err().unwrap();
        assert_eq!(err.to_string(), "log-derivative of zero series");
    }

    #[test]
    fn compose_examples() {
        let one = FieldElem::one();
        // 1/w at alpha t
        let s = LaurentSeries::monomial(alpha(), 1);
        let r = ls_compose_rational(std::slice::from_ref(&one), &[FieldElem::zero(), one.clone()], &s, 0, 16).unwrap();
        assert_eq!(r.order(16), Some(-1));
        assert_eq!(*r.coeff(-1), &one / &alpha());
        // (w+1)/(w-1) at 1/t
        let s = LaurentSeries::monomial(one.clone(), -1);
        let r = ls_compose_rational(&[one.clone(), one.clone()], &[-&one, one.clone()], &s, 0, 16).unwrap();
        let got: Vec<FieldElem> = r.window(0, 4);
        let expect = [1, 2, 2, 2].map(FieldElem::from_int);
        assert_eq!(got, expect.to_vec());
    }

    #[test]
    fn indeterminate_composition() {
        let s = LaurentSeries::monomial(FieldElem::one(), 1);
        // denominator w - w == 0
        let err = ls_compose_rational(&[FieldElem::one()], &[FieldElem::zero()], &s, 0, 16)
            .err()
            .unwrap();
        assert!(err.to_string().contains("indeterminate composition; raise truncation"));
    }

    #[test]
    fn taylor_of_rational() {
        // 1/z at zh + 1
        let r = &FieldElem::one() / &FieldElem::var(Sym::Z);
        let s = LaurentSeries::taylor(&r, 1).unwrap();
        let zh1 = &FieldElem::var(Sym::ZHat) + &FieldElem::one();
        assert_eq!(*s.coeff(0), &FieldElem::one() / &zh1);
        assert_eq!(*s.coeff(1), &FieldElem::from_int(-1) / &zh1.pow(2));
    }
}
