//! Forward propagation of local series through `w(z+1) = w(z-1) + N(z, w, w')`.

use serde::Serialize;

use super::seed::{seed_local_data, LocalData, Seed, SeedSpec};
use crate::algebra::laurent::{ls_compose_rational, ls_log_derivative, DEFAULT_TRUNCATION, MAX_TRUNCATION};
use crate::algebra::{FieldElem, GaussRat, LaurentSeries, Sym};
use crate::error::{Error, Result};
use crate::model::DelayDiffEq;

/// Literal coefficients kept per entry: the principal part and the constant
/// term for poles (at most three), the leading term otherwise.
fn kept(order: i64) -> usize {
    if order < 0 {
        (1 - order).min(3) as usize
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Series of `w` at `zh + j + 1` from the series at `zh + j - 1` and `zh + j`.
pub fn cascade_step(eq: &DelayDiffEq, state: &LocalData, j: i64, truncation: usize) -> Result<LaurentSeries> {
    let prev = state
        .get(j - 1)
        .ok_or_else(|| Error::Schema(format!("window lacks offset {}", j - 1)))?;
    let cur = state.get(j).ok_or_else(|| Error::Schema(format!("window lacks offset {}", j)))?;
    let taylor = |r: &crate::algebra::RatFunc| LaurentSeries::taylor(r.as_field(), j);
    let n = match eq {
        DelayDiffEq::PureLogDeriv { a, b } => {
            let l = ls_log_derivative(cur, truncation)?;
            taylor(b)?.sub(&taylor(a)?.mul(&l))
        }
        DelayDiffEq::LogDeriv(e) => {
            let l = ls_log_derivative(cur, truncation)?;
            let r = ls_compose_rational(&e.p.field_coeffs(), &e.q.field_coeffs(), cur, j, truncation)?;
            r.sub(&taylor(&e.a)?.mul(&l))
        }
        DelayDiffEq::InverseSquare { a, b, c } => {
            let inv = cur.inv(truncation)?;
            let t1 = taylor(a)?.mul(&cur.derivative()).mul(&inv).mul(&inv);
            let t2 = taylor(b)?.mul(&inv);
            t1.add(&t2).add(&taylor(c)?)
        }
    };
    Ok(prev.add(&n).with_offset(j + 1))
}

/// One offset of a singularity pattern.
#[derive(Clone, Debug)]
pub struct PatternEntry {
    pub offset: i64,
    pub order: i64,
    pub leading: FieldElem,
    pub certified: bool,
    /// Literal coefficients of `t^order, t^(order+1), ...`.
    pub coeffs: Vec<FieldElem>,
    pub truncation: usize,
}

impl PatternEntry {
    /// Literal coefficient of `t^n`, if kept.
    pub fn coeff(&self, n: i64) -> Option<FieldElem> {
        if n < self.order {
            return Some(FieldElem::zero());
        }
        self.coeffs.get((n - self.order) as usize).cloned()
    }

    /// Coefficient of `(z - zh)^n` when the expansion is rewritten with
    /// coefficients that are functions of `z` rather than of `zh`:
    /// `g_n = sum_m (-1)^m / m! d^m/dzh^m c_(n-m)`.
    pub fn normal_form(&self, n: i64) -> Option<FieldElem> {
        let mut acc = FieldElem::zero();
        let mut fact = GaussRat::from_int(1);
        for m in 0..=(n - self.order).max(-1) {
            if m > 0 {
                fact = &fact * &GaussRat::from_int(m);
            }
            let mut c = self.coeff(n - m)?;
            for _ in 0..m {
                c = c.derivative(Sym::ZHat);
            }
            let term = c.scale(&fact.inv().expect("nonzero"));
            acc = if m % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        Some(acc.reduce())
    }

    pub fn is_pole(&self) -> bool {
        self.certified && self.order < 0
    }
}

#[derive(Clone, Debug)]
pub struct SingularityPattern {
    pub seed: Seed,
    pub direction: Direction,
    pub entries: Vec<PatternEntry>,
    /// Truncation that produced the certified entries.
    pub truncation: usize,
    /// Why the cascade stopped early, if it did.
    pub stopped: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternEntryJson {
    pub offset: i64,
    pub order: i64,
    pub leading: String,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternJson {
    pub seed: SeedSpec,
    pub direction: Direction,
    pub truncation: usize,
    pub entries: Vec<PatternEntryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopped: Option<String>,
}

impl SingularityPattern {
    pub fn entry(&self, offset: i64) -> Option<&PatternEntry> {
        self.entries.iter().find(|e| e.offset == offset)
    }

    pub fn orders(&self) -> Vec<i64> {
        self.entries.iter().filter(|e| e.certified).map(|e| e.order).collect()
    }

    pub fn certified_len(&self) -> usize {
        self.entries.iter().take_while(|e| e.certified).count()
    }

    pub fn to_json(&self) -> PatternJson {
        PatternJson {
            seed: SeedSpec::from(&self.seed),
            direction: self.direction,
            truncation: self.truncation,
            entries: self
                .entries
                .iter()
                .map(|e| PatternEntryJson {
                    offset: e.offset,
                    order: e.order,
                    leading: e.leading.to_string(),
                    certified: e.certified,
                })
                .collect(),
            stopped: self.stopped.clone(),
        }
    }
}

fn run_once(
    eq: &DelayDiffEq,
    seed: &Seed,
    steps: usize,
    truncation: usize,
) -> std::result::Result<Vec<PatternEntry>, (Vec<PatternEntry>, Error)> {
    let mut state = seed_local_data(seed).map_err(|e| (Vec::new(), e))?;
    let mut out = Vec::with_capacity(steps);
    for j in 0..steps as i64 {
        let next = match cascade_step(eq, &state, j, truncation).and_then(|s| s.certified_order(truncation).map(|o| (s, o))) {
            Ok(v) => v,
            Err(e) => return Err((out, e)),
        };
        let (next, order) = next;
        let coeffs = next.window(order, kept(order));
        out.push(PatternEntry {
            offset: j + 1,
            order,
            leading: coeffs[0].reduce(),
            certified: true,
            coeffs: coeffs.into_iter().map(|c| c.reduce()).collect(),
            truncation,
        });
        state.insert(next);
        // only the two most recent offsets feed the next step
        state.window.remove(&(j - 1));
    }
    Ok(out)
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::OrderUncertified { .. } | Error::IndeterminateComposition { .. })
}

/// Runs `steps` cascade steps, doubling the truncation on certification
/// failures up to `MAX_TRUNCATION`. A failure at the cap ends the pattern with
/// an uncertified entry.
pub fn run_cascade(eq: &DelayDiffEq, seed: &Seed, steps: usize, truncation: usize) -> Result<SingularityPattern> {
    run_cascade_dir(eq, seed, steps, truncation, Direction::Forward)
}

pub fn run_cascade_dir(eq: &DelayDiffEq, seed: &Seed, steps: usize, truncation: usize, direction: Direction) -> Result<SingularityPattern> {
    if steps == 0 {
        return Err(Error::Schema("steps must be at least 1".into()));
    }
    let mirrored;
    let work = match direction {
        Direction::Forward => eq,
        Direction::Backward => {
            mirrored = eq.mirror();
            &mirrored
        }
    };
    let mut m = truncation.max(1);
    let mut best: Vec<PatternEntry> = Vec::new();
    loop {
        match run_once(work, seed, steps, m) {
            Ok(entries) => {
                return Ok(finish(seed, direction, entries, m, None));
            }
            Err((partial, e)) if retryable(&e) => {
                if partial.len() >= best.len() {
                    best = partial;
                }
                if m >= MAX_TRUNCATION {
                    let failed_offset = best.len() as i64 + 1;
                    best.push(PatternEntry {
                        offset: failed_offset,
                        order: 0,
                        leading: FieldElem::zero(),
                        certified: false,
                        coeffs: Vec::new(),
                        truncation: m,
                    });
                    let msg = Error::TruncationExhausted {
                        cap: MAX_TRUNCATION,
                        last: e.to_string(),
                    };
                    return Ok(finish(seed, direction, best, m, Some(msg.to_string())));
                }
                m = (m * 2).min(MAX_TRUNCATION);
            }
            Err((_, e)) => return Err(e),
        }
    }
}

fn finish(
    seed: &Seed,
    direction: Direction,
    mut entries: Vec<PatternEntry>,
    truncation: usize,
    stopped: Option<String>,
) -> SingularityPattern {
    if direction == Direction::Backward {
        for e in &mut entries {
            e.offset = -e.offset;
        }
    }
    SingularityPattern {
        seed: seed.clone(),
        direction,
        entries,
        truncation,
        stopped,
    }
}

/// Pole orders along a cascade seeded by a pole of order `q`.
#[derive(Clone, Debug, Serialize)]
pub struct BlowupReport {
    pub degree: usize,
    pub applicable: bool,
    pub orders: Vec<i64>,
    /// Every consecutive ratio of pole orders equals `degree`.
    pub geometric: bool,
}

pub fn polynomial_blowup(eq: &DelayDiffEq, q: u32, steps: usize) -> Result<BlowupReport> {
    let DelayDiffEq::LogDeriv(e) = eq else {
        return Err(Error::Hypothesis(
            "blowup analysis needs a log-derivative equation with polynomial right side".into(),
        ));
    };
    if e.q.degree() != 0 {
        return Err(Error::Hypothesis("blowup analysis needs deg Q = 0".into()));
    }
    let d = e.p.degree();
    let pat = run_cascade(eq, &Seed::pole(q), steps, DEFAULT_TRUNCATION)?;
    let orders: Vec<i64> = pat.orders().iter().map(|o| -o).collect();
    let mut prev = q as i64;
    let mut geometric = d >= 2 && !orders.is_empty();
    for &o in &orders {
        if o != prev * d as i64 {
            geometric = false;
        }
        prev = o;
    }
    Ok(BlowupReport {
        degree: d,
        applicable: d >= 2,
        orders,
        geometric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RatFunc;

    fn rf(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn zh(j: i64) -> FieldElem {
        &FieldElem::var(Sym::ZHat) + &FieldElem::from_int(j)
    }

    #[test]
    fn pure_log_deriv_with_a_equal_z() {
        let eq = DelayDiffEq::pure_log_deriv(rf("z"), rf("0")).unwrap();
        let pat = run_cascade(&eq, &Seed::zero(1), 3, 16).unwrap();
        assert_eq!(pat.orders(), vec![-1, -1, -1]);
        assert_eq!(pat.entries[0].leading, -&zh(0));
        assert_eq!(pat.entries[1].leading, zh(1));
        assert_eq!(pat.entries[2].leading, FieldElem::from_int(2));
    }

    #[test]
    fn constant_coefficients_end_in_difference_of_b() {
        let eq = DelayDiffEq::pure_log_deriv(rf("2"), rf("z^2")).unwrap();
        let pat = run_cascade(&eq, &Seed::zero(1), 3, 16).unwrap();
        assert_eq!(pat.orders(), vec![-1, -1, 0]);
        // b(zh + 2) - b(zh + 1)
        let expect = &zh(2).pow(2) - &zh(1).pow(2);
        assert_eq!(pat.entries[2].leading, expect);
    }

    #[test]
    fn quartic_blowup() {
        let p = crate::model::WPoly::new(vec![rf("0"), rf("0"), rf("0"), rf("0"), rf("1")]);
        let fq = crate::model::FactoredQ::new(vec![], None).unwrap();
        let eq = DelayDiffEq::log_deriv(rf("1"), p, fq, false).unwrap();
        let r = polynomial_blowup(&eq, 1, 3).unwrap();
        assert_eq!(r.orders, vec![4, 16, 64]);
        assert!(r.geometric);
    }

    #[test]
    fn backward_cascade_uses_mirror() {
        let eq = DelayDiffEq::pure_log_deriv(rf("z"), rf("0")).unwrap();
        let pat = run_cascade_dir(&eq, &Seed::zero(1), 2, 16, Direction::Backward).unwrap();
        assert_eq!(pat.entries[0].offset, -1);
        assert_eq!(pat.orders(), vec![-1, -1]);
    }
}
