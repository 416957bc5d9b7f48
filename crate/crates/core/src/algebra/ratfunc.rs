//! Rational functions of `z`, possibly with constant parameters (λ, μ, ν, k).

use std::fmt;

use num_complex::Complex64;

use super::field::FieldElem;
use super::gauss::GaussRat;
use super::mpoly::{MPoly, Sym, NSYM};
use crate::error::Result;

/// Symbols a coefficient function may not contain: they belong to the local analysis.
const LOCAL_SYMS: [Sym; 3] = [Sym::ZHat, Sym::Alpha, Sym::K];

#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc(FieldElem);

impl RatFunc {
    /// Wraps a field element; `None` if it mentions local symbols.
    pub fn new(f: FieldElem) -> Option<Self> {
        if LOCAL_SYMS.iter().any(|s| f.contains(*s)) {
            None
        } else {
            Some(RatFunc(f.reduce()))
        }
    }

    pub fn zero() -> Self {
        RatFunc(FieldElem::zero())
    }

    pub fn one() -> Self {
        RatFunc(FieldElem::one())
    }

    pub fn z() -> Self {
        RatFunc(FieldElem::var(Sym::Z))
    }

    pub fn constant(c: GaussRat) -> Self {
        RatFunc(FieldElem::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc(FieldElem::from_int(n))
    }

    pub fn parse(src: &str) -> Result<Self> {
        let f = super::parse::parse_expr(src)?;
        Ok(RatFunc(f))
    }

    /// Polynomial from coefficients `c_0 + c_1 z + ...`.
    pub fn poly(coeffs: &[GaussRat]) -> Self {
        let mut acc = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = [0u16; NSYM];
            e[0] = k as u16;
            acc = &acc + &MPoly::monomial(e, c.clone());
        }
        RatFunc(FieldElem::from_poly(acc))
    }

    pub fn as_field(&self) -> &FieldElem {
        &self.0
    }

    pub fn into_field(self) -> FieldElem {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// No dependence on `z` (parameters allowed).
    pub fn is_constant_in_z(&self) -> bool {
        self.0.derivative(Sym::Z).is_zero()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_constant_in_z() {
            self.0.reduce().as_constant()
        } else {
            None
        }
    }

    /// `R(z + c)`.
    pub fn shift(&self, c: &GaussRat) -> RatFunc {
        RatFunc(self.0.shift(Sym::Z, c))
    }

    pub fn shift_int(&self, c: i64) -> RatFunc {
        self.shift(&GaussRat::from_int(c))
    }

    pub fn derive(&self) -> RatFunc {
        RatFunc(self.0.derivative(Sym::Z))
    }

    /// `R(-z)`.
    pub fn reflect(&self) -> RatFunc {
        RatFunc(self.0.substitute(Sym::Z, &MPoly::var(Sym::Z).scale(&GaussRat::from_int(-1))))
    }

    /// `R(zh + j)` as a field element.
    pub fn at_zhat(&self, j: i64) -> FieldElem {
        self.0.substitute(Sym::Z, &(&MPoly::var(Sym::ZHat) + &MPoly::from_int(j)))
    }

    /// Exact value at a Gaussian rational point (parameters stay symbolic).
    pub fn eval_exact(&self, z: &GaussRat) -> FieldElem {
        self.0.substitute(Sym::Z, &MPoly::constant(z.clone()))
    }

    /// Numeric value; parameters must have been substituted already.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut pt = [Complex64::new(0.0, 0.0); NSYM];
        pt[0] = z;
        self.0.eval_complex(&pt)
    }

    /// Degrees of numerator and denominator in `z`.
    pub fn degrees(&self) -> (u32, u32) {
        let r = self.0.reduce();
        let dn = r.numer().degree_in(Sym::Z);
        let dd = r.denom().atoms().map(|(a, e)| a.degree_in(Sym::Z) * e).sum();
        (dn, dd)
    }

    pub fn substitute_param(&self, s: Sym, v: &GaussRat) -> RatFunc {
        RatFunc(self.0.substitute(s, &MPoly::constant(v.clone())))
    }
}

impl<'a> std::ops::Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        RatFunc(&self.0 + &rhs.0)
    }
}

impl<'a> std::ops::Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        RatFunc(&self.0 - &rhs.0)
    }
}

impl<'a> std::ops::Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc(&self.0 * &rhs.0)
    }
}

impl<'a> std::ops::Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        RatFunc(&self.0 / &rhs.0)
    }
}

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc(-&self.0)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `R(z + c)`.
pub fn rf_shift(r: &RatFunc, c: &GaussRat) -> RatFunc {
    r.shift(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_examples() {
        let z2 = RatFunc::parse("z^2").unwrap();
        assert_eq!(rf_shift(&z2, &1.into()), RatFunc::parse("z^2 + 2*z + 1").unwrap());
        let inv = RatFunc::parse("1/z").unwrap();
        assert_eq!(rf_shift(&inv, &(-1).into()), RatFunc::parse("1/(z-1)").unwrap());
    }

    #[test]
    fn affine_second_difference_vanishes() {
        let a = RatFunc::new(FieldElem::var(Sym::Lambda) + FieldElem::var(Sym::Mu) * FieldElem::var(Sym::Z)).unwrap();
        let d2 = &(&a.shift_int(2) - &a.shift_int(1).mul_int(2)) + &a;
        assert!(d2.is_zero());
    }

    impl RatFunc {
        fn mul_int(&self, n: i64) -> RatFunc {
            RatFunc(self.0.scale(&GaussRat::from_int(n)))
        }
    }

    #[test]
    fn local_symbols_rejected() {
        assert!(RatFunc::new(FieldElem::var(Sym::ZHat)).is_none());
    }

    #[test]
    fn degrees_of_fraction() {
        let r = RatFunc::parse("(z^3 + 1)/(z^2 - 4)").unwrap();
        assert_eq!(r.degrees(), (3, 2));
    }
}
