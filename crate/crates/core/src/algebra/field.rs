//! Fractions of multivariate polynomials with a partially factored denominator.
//!
//! The denominator is a product of monic "atoms" with multiplicities. Sums take
//! the least common multiple of the atom multisets, so repeated factors never
//! multiply out. No multivariate gcd is ever computed: cancellation is limited
//! to exact trial division of the numerator by known atoms, and the zero test
//! only looks at the numerator.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::mpoly::{MPoly, Sym, NSYM};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Denom {
    atoms: BTreeMap<MPoly, u32>,
}

impl Denom {
    pub fn one() -> Self {
        Denom::default()
    }

    pub fn is_one(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&MPoly, u32)> {
        self.atoms.iter().map(|(a, e)| (a, *e))
    }

    pub fn expand(&self) -> MPoly {
        let mut acc = MPoly::one();
        for (a, e) in &self.atoms {
            acc = &acc * &a.pow(*e);
        }
        acc
    }

    fn insert(&mut self, atom: MPoly, e: u32) {
        if e == 0 {
            return;
        }
        *self.atoms.entry(atom).or_insert(0) += e;
    }

    fn lcm(&self, other: &Denom) -> Denom {
        let mut out = self.clone();
        for (a, e) in &other.atoms {
            let slot = out.atoms.entry(a.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        out
    }

    /// `self / other` as a polynomial; `other` must divide `self` atomwise.
    fn cofactor(&self, other: &Denom) -> MPoly {
        let mut acc = MPoly::one();
        for (a, e) in &self.atoms {
            let have = other.atoms.get(a).copied().unwrap_or(0);
            if *e > have {
                acc = &acc * &a.pow(*e - have);
            }
        }
        acc
    }
}

/// An element of the fraction field ℚ(i)(z, ẑ, α, K, λ, μ, ν, k).
#[derive(Clone, Debug)]
pub struct FieldElem {
    num: MPoly,
    den: Denom,
}

impl FieldElem {
    pub fn zero() -> Self {
        FieldElem {
            num: MPoly::zero(),
            den: Denom::one(),
        }
    }

    pub fn one() -> Self {
        FieldElem::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        FieldElem { num: p, den: Denom::one() }
    }

    pub fn constant(c: GaussRat) -> Self {
        FieldElem::from_poly(MPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        FieldElem::constant(GaussRat::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        FieldElem::constant(GaussRat::from_ratio(n, d))
    }

    pub fn var(s: Sym) -> Self {
        FieldElem::from_poly(MPoly::var(s))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &Denom {
        &self.den
    }

    /// Builds `num / den` from arbitrary polynomials.
    pub fn from_parts(num: MPoly, den: MPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(&FieldElem::from_poly(num) / &FieldElem::from_poly(den))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// The value as a Gaussian rational when it is a constant.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, s: Sym) -> bool {
        self.num.contains(s) || self.den.atoms.keys().any(|a| a.contains(s))
    }

    /// Variables present in numerator or denominator.
    pub fn symbols(&self) -> Vec<Sym> {
        Sym::ALL.iter().copied().filter(|s| self.contains(*s)).collect()
    }

    /// Cross-multiplied polynomial equality test.
    pub fn equals(&self, other: &FieldElem) -> bool {
        let l = self.den.lcm(&other.den);
        let lhs = &self.num * &l.cofactor(&self.den);
        let rhs = &other.num * &l.cofactor(&other.den);
        lhs == rhs
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(&FieldElem::one() / self)
    }

    pub fn pow(&self, e: i32) -> FieldElem {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let e = e as u32;
        if e == 0 {
            return FieldElem::one();
        }
        let mut den = Denom::one();
        for (a, k) in &self.den.atoms {
            den.insert(a.clone(), k * e);
        }
        FieldElem { num: self.num.pow(e), den }
    }

    pub fn scale(&self, c: &GaussRat) -> FieldElem {
        let mut out = self.clone();
        out.num = out.num.scale(c);
        if out.num.is_zero() {
            out.den = Denom::one();
        }
        out
    }

    /// Normalizes a raw denominator polynomial into monic atoms, trial-dividing
    /// by `known` atoms first. Returns the constant that was split off.
    fn absorb_denominator(target: &mut Denom, p: &MPoly, mult: u32, known: &[&MPoly]) -> GaussRat {
        let content = p.monomial_content();
        let mut rest = if content.iter().any(|&e| e > 0) {
            p.div_monomial(&content)
        } else {
            p.clone()
        };
        for (i, &e) in content.iter().enumerate().take(NSYM) {
            if e > 0 {
                target.insert(MPoly::var(Sym::ALL[i]), e as u32 * mult);
            }
        }
        for atom in known {
            if atom.len() < 2 {
                continue;
            }
            while rest.len() >= atom.len() && !rest.is_constant() {
                match rest.exact_div(atom) {
                    Some(q) => {
                        rest = q;
                        target.insert((*atom).clone(), mult);
                    }
                    None => break,
                }
            }
        }
        if let Some(c) = rest.as_constant() {
            return c.pow(mult);
        }
        let (lc, monic) = rest.monic();
        target.insert(monic, mult);
        lc.pow(mult)
    }

    /// Cancels atoms that divide the numerator. Single-variable atoms are
    /// cancelled through monomial content; others by exact trial division.
    pub fn reduce(&self) -> FieldElem {
        if self.num.is_zero() {
            return FieldElem::zero();
        }
        let mut num = self.num.clone();
        let mut den = Denom::one();
        for (atom, e) in &self.den.atoms {
            let mut left = *e;
            if let Some(s) = atom.as_variable() {
                let have = num.monomial_content()[s.index()] as u32;
                let k = have.min(left);
                if k > 0 {
                    let mut m = [0u16; NSYM];
                    m[s.index()] = k as u16;
                    num = num.div_monomial(&m);
                    left -= k;
                }
            } else {
                while left > 0 && num.len() >= atom.len() {
                    match num.exact_div(atom) {
                        Some(q) => {
                            num = q;
                            left -= 1;
                        }
                        None => break,
                    }
                }
            }
            den.insert(atom.clone(), left);
        }
        FieldElem { num, den }
    }

    /// Cancels only single-variable atoms against the numerator's monomial content.
    fn reduce_monomial_atoms(mut self) -> FieldElem {
        if self.num.is_zero() {
            return FieldElem::zero();
        }
        let content = self.num.monomial_content();
        if content.iter().all(|&e| e == 0) {
            return self;
        }
        let mut cancel = [0u16; NSYM];
        let mut changed = false;
        for i in 0..NSYM {
            if content[i] == 0 {
                continue;
            }
            let v = MPoly::var(Sym::ALL[i]);
            if let Some(e) = self.den.atoms.get_mut(&v) {
                let k = (*e).min(content[i] as u32);
                *e -= k;
                cancel[i] = k as u16;
                changed |= k > 0;
                if *e == 0 {
                    self.den.atoms.remove(&v);
                }
            }
        }
        if changed {
            self.num = self.num.div_monomial(&cancel);
        }
        self
    }

    pub fn derivative(&self, s: Sym) -> FieldElem {
        if !self.contains(s) {
            return FieldElem::zero();
        }
        // (n / prod A_i^e_i)' = (n' P - n sum e_i A_i' P / A_i) / prod A_i^(e_i + 1), P = prod A_i
        let active: Vec<(&MPoly, u32)> = self.den.atoms.iter().filter(|(a, _)| a.contains(s)).map(|(a, e)| (a, *e)).collect();
        let mut p_all = MPoly::one();
        for (a, _) in &active {
            p_all = &p_all * *a;
        }
        let mut num = &self.num.derivative(s) * &p_all;
        for (i, (a, e)) in active.iter().enumerate() {
            let mut others = MPoly::one();
            for (j, (b, _)) in active.iter().enumerate() {
                if i != j {
                    others = &others * *b;
                }
            }
            let term = &(&self.num * &a.derivative(s)) * &others;
            num = &num - &term.scale(&GaussRat::from_int(*e as i64));
        }
        let mut den = self.den.clone();
        for (a, _) in &active {
            den.insert((*a).clone(), 1);
        }
        FieldElem { num, den }.reduce()
    }

    /// Replaces symbol `s` by the polynomial `q` everywhere.
    pub fn substitute(&self, s: Sym, q: &MPoly) -> FieldElem {
        if !self.contains(s) {
            return self.clone();
        }
        let mut out = FieldElem::from_poly(self.num.substitute(s, q));
        for (a, e) in &self.den.atoms {
            let sa = FieldElem::from_poly(a.substitute(s, q)).pow(e.to_owned() as i32);
            out = &out / &sa;
        }
        out.reduce()
    }

    pub fn shift(&self, s: Sym, c: &GaussRat) -> FieldElem {
        if c.is_zero() {
            return self.clone();
        }
        self.substitute(s, &(&MPoly::var(s) + &MPoly::constant(c.clone())))
    }

    pub fn eval_complex(&self, point: &[num_complex::Complex64; NSYM]) -> num_complex::Complex64 {
        let mut v = self.num.eval_complex(point);
        for (a, e) in &self.den.atoms {
            v /= a.eval_complex(point).powu(*e);
        }
        v
    }

    /// Numerator and expanded denominator.
    pub fn to_parts(&self) -> (MPoly, MPoly) {
        (self.num.clone(), self.den.expand())
    }

    pub fn num_terms(&self) -> usize {
        self.num.len() + self.den.atoms.keys().map(|a| a.len()).sum::<usize>()
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<'a> std::ops::Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            return FieldElem {
                num,
                den: self.den.clone(),
            }
            .reduce_monomial_atoms();
        }
        let l = self.den.lcm(&rhs.den);
        let num = &(&self.num * &l.cofactor(&self.den)) + &(&rhs.num * &l.cofactor(&rhs.den));
        FieldElem { num, den: l }.reduce_monomial_atoms()
    }
}

impl<'a> std::ops::Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl<'a> std::ops::Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        if self.is_zero() || rhs.is_zero() {
            return FieldElem::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel: self.num against rhs.den and rhs.num against self.den
        let a = FieldElem {
            num: self.num.clone(),
            den: rhs.den.clone(),
        }
        .reduce();
        let b = FieldElem {
            num: rhs.num.clone(),
            den: self.den.clone(),
        }
        .reduce();
        let mut den = a.den;
        for (atom, e) in b.den.atoms {
            den.insert(atom, e);
        }
        FieldElem { num: &a.num * &b.num, den }
    }
}

impl<'a> std::ops::Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    /// Panics on division by an identically zero element.
    fn div(self, rhs: &FieldElem) -> FieldElem {
        assert!(!rhs.is_zero(), "division by identically zero field element");
        if self.is_zero() {
            return FieldElem::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c.inv().expect("nonzero"));
        }
        // self * rhs.den / rhs.num
        let mut den = Denom::one();
        let known: Vec<&MPoly> = self.den.atoms.keys().chain(rhs.den.atoms.keys()).collect();
        let lc = FieldElem::absorb_denominator(&mut den, &rhs.num, 1, &known);
        let inv_lc = lc.inv().expect("nonzero content");
        let top = FieldElem {
            num: rhs.den.expand().scale(&inv_lc),
            den,
        };
        self * &top
    }
}

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

impl Zero for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for FieldElem {
    fn one() -> Self {
        FieldElem::one()
    }
}

impl From<MPoly> for FieldElem {
    fn from(p: MPoly) -> Self {
        FieldElem::from_poly(p)
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<GaussRat> for FieldElem {
    fn from(c: GaussRat) -> Self {
        FieldElem::constant(c)
    }
}

/// Zero test for a fraction.
pub fn frac_is_zero(f: &FieldElem) -> bool {
    f.is_zero()
}

fn wrap(p: &MPoly) -> String {
    if p.len() <= 1 {
        p.to_string()
    } else {
        format!("({})", p)
    }
}

impl fmt::Display for FieldElem {
    /// Prints `num` or `num/(atom^e*...)` in the expression grammar accepted by
    /// the parser's extended mode.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce();
        if r.den.is_one() {
            return write!(f, "{}", r.num);
        }
        let parts: Vec<String> = r
            .den
            .atoms
            .iter()
            .map(|(a, e)| if *e == 1 { wrap(a) } else { format!("{}^{}", wrap(a), e) })
            .collect();
        let den = if parts.len() == 1 {
            parts[0].clone()
        } else {
            format!("({})", parts.join("*"))
        };
        write!(f, "{}/{}", wrap(&r.num), den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FieldElem {
        FieldElem::var(Sym::Z)
    }

    #[test]
    fn cancellation_example() {
        // (z^2 - 1)/(z - 1) - (z + 1) == 0
        let one = FieldElem::one();
        let f = &(&(&z() * &z()) - &one) / &(&z() - &one);
        let g = &z() + &one;
        assert!(frac_is_zero(&(&f - &g)));
        assert_eq!(f.reduce().to_string(), "z + 1");
    }

    #[test]
    fn monomial_atoms_cancel() {
        let a = FieldElem::var(Sym::Alpha);
        let f = &(&z() / &a) * &a;
        assert!(f.denom().is_one());
        assert_eq!(f, z());
    }

    #[test]
    fn derivative_of_reciprocal() {
        let f = &FieldElem::one() / &(&z() * &z());
        let d = f.derivative(Sym::Z);
        let expect = &FieldElem::from_int(-2) / &z().pow(3);
        assert_eq!(d, expect);
    }

    #[test]
    fn display_of_fraction() {
        let f = &FieldElem::from_int(-2) / &FieldElem::var(Sym::Alpha);
        assert_eq!(f.to_string(), "-2/alpha");
        let g = (&FieldElem::one() / &(&z() + &FieldElem::one())).pow(2);
        assert_eq!(g.to_string(), "1/(z + 1)^2");
    }
}
