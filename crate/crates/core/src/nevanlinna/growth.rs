//! Order and hyper-order estimates by least squares on table rows.

use serde::Serialize;

use super::table::NevTable;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Two standard errors of the fitted slope.
    pub width: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    pub rho: Estimate,
    pub rho2: Estimate,
    /// Slope of `log log n(r)` against `log r`, when enough rows have `n > e`.
    pub lambda2: Option<Estimate>,
    pub rows_used: usize,
    pub low_confidence: bool,
}

/// Least-squares slope and its standard error.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let resid: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum();
    let se = if xs.len() > 2 {
        (resid / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    Estimate {
        value: slope,
        width: 2.0 * se,
    }
}

pub const MIN_ROWS: usize = 8;

pub fn growth_estimates(table: &NevTable) -> Result<GrowthEstimate> {
    let e = std::f64::consts::E;
    let rows: Vec<_> = table.rows.iter().filter(|r| r.poles.t > e).collect();
    if rows.len() < MIN_ROWS {
        return Err(Error::InsufficientEntries {
            need: MIN_ROWS,
            have: rows.len(),
        });
    }
    let lr: Vec<f64> = rows.iter().map(|r| r.r_eff.ln()).collect();
    let lt: Vec<f64> = rows.iter().map(|r| r.poles.t.ln()).collect();
    let llt: Vec<f64> = lt.iter().map(|v| v.ln()).collect();
    let nrows: Vec<_> = table.rows.iter().filter(|r| r.poles.n as f64 > e).collect();
    let lambda2 = (nrows.len() >= MIN_ROWS).then(|| {
        let x: Vec<f64> = nrows.iter().map(|r| r.r_eff.ln()).collect();
        let y: Vec<f64> = nrows.iter().map(|r| (r.poles.n as f64).ln().ln()).collect();
        fit_slope(&x, &y)
    });
    let range = lr[lr.len() - 1] - lr[0];
    Ok(GrowthEstimate {
        rho: fit_slope(&lr, &lt),
        rho2: fit_slope(&lr, &llt),
        lambda2,
        rows_used: rows.len(),
        low_confidence: range < 4f64.ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let e = fit_slope(&xs, &ys);
        assert!((e.value - 2.0).abs() < 1e-12 && e.width < 1e-12);
    }
}
