//! Reading a singularity pattern: does the pole chain confine?

use serde::Serialize;

use super::engine::{PatternEntry, SingularityPattern};
use crate::algebra::{FieldElem, RatFunc, Sym};
use crate::error::{Error, Result};
use crate::model::{DelayDiffEq, EqClass};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum VerdictKind {
    /// The chain ends at this offset with a value that still carries the free seed datum.
    ConfinedAt(i64),
    /// A simple pole is followed by a finite value fixed by the obstruction.
    SimplePoleTail,
    /// The chain ends (or stalls) without recovering the seed datum.
    BoundedPoleChain,
    /// Pole orders multiply by this factor at every step.
    ExponentialOrderGrowth(i64),
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub label: String,
    pub offset: i64,
    #[serde(serialize_with = "ser_field")]
    pub value: FieldElem,
    pub is_zero: bool,
}

fn ser_field<S: serde::Serializer>(f: &FieldElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl Witness {
    fn new(label: impl Into<String>, offset: i64, value: FieldElem) -> Self {
        let value = value.reduce();
        Witness {
            label: label.into(),
            offset,
            is_zero: value.is_zero(),
            value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfinementVerdict {
    pub kind: VerdictKind,
    /// The deciding element first, followed by supporting ones.
    pub witnesses: Vec<Witness>,
}

impl ConfinementVerdict {
    pub fn witness(&self) -> &FieldElem {
        &self.witnesses[0].value
    }
}

/// Principal-part coefficients of an entry, as functions of `z`, scaled by the seed's leading coefficient.
fn principal_witnesses(entry: &PatternEntry, q: i64, scale: &FieldElem, class: EqClass) -> Vec<Witness> {
    let mut out = Vec::new();
    for k in q..0 {
        let g = entry.normal_form(k).unwrap_or_else(FieldElem::zero);
        let label = match (class, q - k) {
            (EqClass::InverseSquare, 0) if q == -2 => "second-difference resonance".to_string(),
            (EqClass::InverseSquare, -1) if q == -2 => "gamma".to_string(),
            _ => format!("alpha * coefficient of (z - zh)^{}", k),
        };
        out.push(Witness::new(label, entry.offset, scale * &g));
    }
    out
}

fn depends_on_k(f: &FieldElem) -> bool {
    !f.derivative(Sym::K).is_zero()
}

pub fn confinement_report(pattern: &SingularityPattern, eq: &DelayDiffEq) -> Result<ConfinementVerdict> {
    let entries: Vec<&PatternEntry> = pattern.entries.iter().take_while(|e| e.certified).collect();
    if entries.len() < 3 {
        return Err(Error::InsufficientEntries {
            need: 3,
            have: entries.len(),
        });
    }
    let class = eq.class();
    let alpha = pattern.seed.leading.clone();
    let seed_has_k = depends_on_k(&pattern.seed.regular);

    // geometric growth of pole orders
    let poles: Vec<i64> = entries.iter().take_while(|e| e.order < 0).map(|e| -e.order).collect();
    if poles.len() >= 3 {
        let d = poles[1] / poles[0];
        let geometric = d >= 2 && poles.windows(2).all(|w| w[1] == w[0] * d);
        if geometric {
            let last = entries[poles.len() - 1];
            return Ok(ConfinementVerdict {
                kind: VerdictKind::ExponentialOrderGrowth(d),
                witnesses: vec![Witness::new("leading coefficient", last.offset, last.leading.clone())],
            });
        }
    }

    let q = entries[0].order.min(-1);
    // first finite value that remembers the seed datum
    for (i, e) in entries.iter().enumerate() {
        if e.order < 0 {
            continue;
        }
        let recovered = if seed_has_k { depends_on_k(&e.leading) } else { e.order == 0 };
        if recovered {
            let mut witnesses = principal_witnesses(e, q, &alpha, class);
            witnesses.push(Witness::new("recovered value", e.offset, e.leading.clone()));
            return Ok(ConfinementVerdict {
                kind: VerdictKind::ConfinedAt(e.offset),
                witnesses,
            });
        }
        if e.order == 0 {
            let prev = if i > 0 { Some(entries[i - 1]) } else { None };
            if let Some(p) = prev.filter(|p| p.order == -1 && q < -1) {
                let residue = p.normal_form(-1).unwrap_or_else(FieldElem::zero);
                return Ok(ConfinementVerdict {
                    kind: VerdictKind::SimplePoleTail,
                    witnesses: vec![
                        Witness::new("gamma", p.offset, &alpha * &residue),
                        Witness::new("terminal value", e.offset, e.leading.clone()),
                    ],
                });
            }
            return Ok(ConfinementVerdict {
                kind: VerdictKind::BoundedPoleChain,
                witnesses: vec![Witness::new("terminal value", e.offset, e.leading.clone())],
            });
        }
    }
    let last = entries[entries.len() - 1];
    Ok(ConfinementVerdict {
        kind: VerdictKind::BoundedPoleChain,
        witnesses: vec![Witness::new("last leading coefficient", last.offset, last.leading.clone())],
    })
}

/// `gamma(z) = (a b(z+2) - (2a(z+1) - a) b)/(a - 2a(z+1)) - 2a(z+2)(a a'(z+1) - a(z+1) a')/(a - 2a(z+1))^2`.
pub fn gamma_of(a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
    let a1 = a.shift_int(1);
    let a2 = a.shift_int(2);
    let two = RatFunc::from_int(2);
    let d = a - &(&two * &a1);
    if d.is_zero() {
        return Err(Error::FormulaSingular);
    }
    let first = &(&(a * &b.shift_int(2)) - &(&(&(&two * &a1) - a) * b)) / &d;
    let da = a.derive();
    let da1 = da.shift_int(1);
    let second = &(&(&two * &a2) * &(&(a * &da1) - &(&a1 * &da))) / &(&d * &d);
    Ok(&first - &second)
}
