//! Resultants in `w`.
//!
//! Convention: `Res(P, Q) = lc(P)^deg(Q) * prod Q(p_i)` over the roots `p_i` of `P`,
//! which is the determinant of the Sylvester matrix with the rows of `P` first.

use super::equation::FactoredQ;
use super::wpoly::WPoly;
use crate::algebra::{FieldElem, RatFunc};

/// Sylvester determinant computed by fraction-field Gaussian elimination.
pub fn resultant_in_w(p: &WPoly, q: &WPoly) -> FieldElem {
    let (m, n) = (p.degree(), q.degree());
    if p.is_zero() || q.is_zero() {
        return FieldElem::zero();
    }
    if m == 0 && n == 0 {
        return FieldElem::one();
    }
    let size = m + n;
    let pc = p.field_coeffs();
    let qc = q.field_coeffs();
    let mut mat = vec![vec![FieldElem::zero(); size]; size];
    for r in 0..n {
        for (k, c) in pc.iter().enumerate() {
            mat[r][r + m - k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + r][r + n - k] = c.clone();
        }
    }
    determinant(mat)
}

pub fn determinant(mut mat: Vec<Vec<FieldElem>>) -> FieldElem {
    let n = mat.len();
    let mut det = FieldElem::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return FieldElem::zero();
        };
        if piv != col {
            mat.swap(piv, col);
            det = -&det;
        }
        let pv = mat[col][col].clone();
        det = &det * &pv;
        let inv = pv.inv().expect("nonzero pivot");
        for r in col + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let f = &mat[r][col] * &inv;
            let (top, bottom) = mat.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                if src.is_zero() {
                    continue;
                }
                *dst = &*dst - &(&f * src);
            }
        }
    }
    det.reduce()
}

/// The same resultant from the supplied roots of a monic `Q`:
/// `(-1)^(deg P deg Q) prod P(b_i)^(m_i)`, times the Sylvester resultant with any residual factor.
pub fn resultant_by_roots(p: &WPoly, fq: &FactoredQ) -> FieldElem {
    let mut acc = FieldElem::one();
    for (b, m) in &fq.factors {
        let v = p.eval_at(b);
        acc = &acc * &v.as_field().pow(*m as i32);
    }
    let dq: usize = fq.factors.iter().map(|(_, m)| *m as usize).sum();
    if (p.degree() * dq) % 2 == 1 {
        acc = -&acc;
    }
    if let Some(res) = &fq.residual {
        acc = &acc * &resultant_in_w(p, res);
    }
    acc.reduce()
}

/// Factored roots `b` of `Q` with `P(z, b(z)) ≡ 0`.
pub fn shared_roots(p: &WPoly, fq: &FactoredQ) -> Vec<RatFunc> {
    fq.factors
        .iter()
        .filter(|(b, _)| p.eval_at(b).is_zero())
        .map(|(b, _)| b.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn simple_resultants() {
        let p = WPoly::new(vec![rf("0"), rf("1")]);
        let q = WPoly::new(vec![rf("-1"), rf("1")]);
        assert_eq!(resultant_in_w(&p, &q), FieldElem::from_int(-1));
        let p = WPoly::linear_root(&rf("z"));
        let q = WPoly::linear_root(&rf("z")).mul(&WPoly::linear_root(&rf("-1")));
        assert!(resultant_in_w(&p, &q).is_zero());
    }

    #[test]
    fn cubic_against_two_roots() {
        let p = WPoly::new(vec![rf("1"), rf("0"), rf("0"), rf("1")]);
        let fq = FactoredQ::new(vec![(rf("z"), 1), (rf("2*z"), 1)], None).unwrap();
        let expect = rf("(1 + z^3)*(1 + 8*z^3)");
        let syl = resultant_in_w(&p, &fq.expand());
        assert_eq!(syl, expect.as_field().clone());
        assert_eq!(resultant_by_roots(&p, &fq), syl);
    }
}
