//! Ratio and threshold checks tied to the zero-density and degree arguments.

use num_complex::Complex64;
use serde::Serialize;

use super::table::{characteristic_table, QuadOptions};
use crate::analytic::model::FunctionModel;
use crate::error::Result;
use crate::model::{mohonko_degree, DelayDiffEq};

/// Rows with `T(r, f)` below this are skipped.
const T_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub r: f64,
    /// `N_bar(r, 1/f) / T(r, f)`.
    pub zero_density: f64,
    /// `(deg R - 3) T(r, f)` and `N_bar(r, 1/f)`, for log-derivative equations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<[f64; 2]>,
    /// `T(r, R(f)) / T(r, f)` for the supplied polynomial `R`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition_ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_degree: Option<usize>,
    pub rows: Vec<RatioRow>,
    pub notes: Vec<String>,
}

/// Per-radius ratios for `f`. `r_poly` holds the constant coefficients of
/// `R(w) = sum r_i w^i`, lowest degree first.
pub fn ratio_checks(
    f: &FunctionModel,
    eq: Option<&DelayDiffEq>,
    r_poly: Option<&[Complex64]>,
    grid: &[f64],
    opts: &QuadOptions,
) -> Result<RatioReport> {
    let base = characteristic_table(f, grid, Some(Complex64::new(0.0, 0.0)), opts)?;
    let deg_r = match eq {
        Some(DelayDiffEq::LogDeriv(e)) => Some(mohonko_degree(e).deg_r),
        _ => None,
    };
    let composed = match r_poly {
        Some(c) => Some(characteristic_table(
            &FunctionModel::PolyOf {
                base: Box::new(f.clone()),
                coeffs: c.to_vec(),
            },
            grid,
            None,
            opts,
        )?),
        None => None,
    };
    let mut rows = Vec::new();
    let mut skipped = 0;
    for (i, row) in base.rows.iter().enumerate() {
        let t = row.poles.t;
        if t < T_FLOOR {
            skipped += 1;
            continue;
        }
        let nbar0 = row.values.as_ref().map(|v| v.big_n_bar).unwrap_or(0.0);
        rows.push(RatioRow {
            r: row.r,
            zero_density: nbar0 / t,
            degree_bound: deg_r.map(|d| [(d as f64 - 3.0) * t, nbar0]),
            composition_ratio: composed.as_ref().map(|c| c.rows[i].poles.t / t),
        });
    }
    let mut notes = Vec::new();
    if skipped > 0 {
        notes.push(format!("{} rows with T(r, f) < {:e} skipped", skipped, T_FLOOR));
    }
    Ok(RatioReport {
        deg_r,
        r_degree: r_poly.map(|c| c.iter().rposition(|x| x.norm() != 0.0).unwrap_or(0)),
        rows,
        notes,
    })
}
