//! Counting, proximity and characteristic functions on a radius grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::model::{FunctionModel, ModelSummary, Target};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub arcs: usize,
    /// Absolute tolerance for `m(r)` as a whole.
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            arcs: 64,
            tol: 1e-10,
            max_depth: 48,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Counts {
    pub n: u64,
    pub n_bar: u64,
    #[serde(rename = "N")]
    pub big_n: f64,
    #[serde(rename = "N_bar")]
    pub big_n_bar: f64,
    pub m: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NevRow {
    pub r: f64,
    /// Radius actually used, moved off nearby singularities.
    pub r_eff: f64,
    pub poles: Counts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Counts>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NevTable {
    pub model: ModelSummary,
    /// The `a` of the `a`-point columns, if present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<[f64; 2]>,
    pub rows: Vec<NevRow>,
}

impl NevTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,n,n_bar,N,N_bar,m,T");
        if self.value.is_some() {
            s.push_str(",a_n,a_n_bar,a_N,a_N_bar,a_m,a_T");
        }
        s.push('\n');
        let cols = |c: &Counts| {
            format!(
                "{},{},{:.12e},{:.12e},{:.12e},{:.12e}",
                c.n, c.n_bar, c.big_n, c.big_n_bar, c.m, c.t
            )
        };
        for row in &self.rows {
            s.push_str(&format!("{:.12e},{}", row.r, cols(&row.poles)));
            if let Some(v) = &row.values {
                s.push(',');
                s.push_str(&cols(v));
            }
            s.push('\n');
        }
        s
    }
}

/// `n`-points sorted by modulus, for fast counting at many radii.
pub struct Inventory {
    pts: Vec<(f64, u32)>,
}

impl Inventory {
    pub fn new(points: Vec<(Complex64, u32)>) -> Self {
        let mut pts: Vec<(f64, u32)> = points.into_iter().map(|(z, m)| (z.norm(), m)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        Inventory { pts }
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.pts.iter().map(|p| p.0)
    }

    /// `(n, n_bar, N, N_bar)` at radius `r`, with the origin term `n(0) log r`.
    pub fn counts(&self, r: f64) -> (u64, u64, f64, f64) {
        let origin = 1e-12 * r.max(1.0);
        let (mut n, mut nb, mut big, mut bigb) = (0u64, 0u64, 0.0, 0.0);
        for &(a, m) in self.pts.iter().take_while(|p| p.0 <= r) {
            n += m as u64;
            nb += 1;
            let l = if a <= origin { r.ln() } else { (r / a).ln() };
            big += m as f64 * l;
            bigb += l;
        }
        (n, nb, big, bigb)
    }
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &(dyn Fn(f64) -> f64 + Sync),
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 || !delta.is_finite() {
        return None;
    }
    Some(simpson(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)? + simpson(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)?)
}

/// `(1/2pi) int_0^2pi log+ |g(r e^{it})| dt`, where `log|g|` is given.
pub fn proximity(log_abs: &(dyn Fn(Complex64) -> f64 + Sync), r: f64, opts: &QuadOptions) -> Result<f64> {
    let f = |t: f64| log_abs(Complex64::from_polar(r, t)).max(0.0);
    let h = 2.0 * PI / opts.arcs as f64;
    let tol = opts.tol * 2.0 * PI / opts.arcs as f64;
    let parts: Vec<Option<f64>> = (0..opts.arcs)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 * h;
            let b = a + h;
            let m = 0.5 * (a + b);
            let (fa, fb, fm) = (f(a), f(b), f(m));
            let whole = h / 6.0 * (fa + 4.0 * fm + fb);
            simpson(&f, a, fa, b, fb, m, fm, whole, tol, opts.max_depth)
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p.ok_or_else(|| Error::Numeric(format!("proximity quadrature did not converge at r = {}", r)))?;
    }
    Ok(total / (2.0 * PI))
}

/// Radius near `r` kept away from the given moduli: moved by at most `1e-6 r`
/// when one lies within `1e-3 r`.
pub fn jitter(r: f64, moduli: &[f64]) -> f64 {
    let near: Vec<f64> = moduli.iter().copied().filter(|a| (a - r).abs() <= 1e-3 * r).collect();
    if near.is_empty() {
        return r;
    }
    let gap = |x: f64| near.iter().map(|a| (a - x).abs()).fold(f64::INFINITY, f64::min);
    let mut best = r;
    for k in [-4i32, -3, -2, -1, 1, 2, 3, 4] {
        let cand = r * (1.0 + 2.5e-7 * k as f64);
        if gap(cand) > gap(best) {
            best = cand;
        }
    }
    best
}

fn counts_for(f: &FunctionModel, target: Target, inv: &Inventory, r: f64, opts: &QuadOptions) -> Result<Counts> {
    let (n, n_bar, big_n, big_n_bar) = inv.counts(r);
    let m = proximity(&|z| f.log_abs(z, target), r, opts)?;
    Ok(Counts {
        n,
        n_bar,
        big_n,
        big_n_bar,
        m,
        t: m + big_n,
    })
}

/// Nevanlinna table for poles of `f` and, optionally, for its `a`-points.
pub fn characteristic_table(f: &FunctionModel, grid: &[f64], value: Option<Complex64>, opts: &QuadOptions) -> Result<NevTable> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 0.0 {
        return Err(Error::Hypothesis("radius grid must be positive and increasing".into()));
    }
    let rmax = grid[grid.len() - 1] * (1.0 + 1e-5);
    let poles = Inventory::new(f.points(Target::Poles, rmax)?);
    let vals = match value {
        Some(a) => Some((a, Inventory::new(f.points(Target::Value(a), rmax)?))),
        None => None,
    };
    let rows: Vec<Result<NevRow>> = grid
        .par_iter()
        .map(|&r| {
            let mut near: Vec<f64> = poles.moduli().filter(|a| (a - r).abs() <= 1e-3 * r).collect();
            if let Some((_, inv)) = &vals {
                near.extend(inv.moduli().filter(|a| (a - r).abs() <= 1e-3 * r));
            }
            let r_eff = jitter(r, &near);
            let pc = counts_for(f, Target::Poles, &poles, r_eff, opts)?;
            let vc = match &vals {
                Some((a, inv)) => Some(counts_for(f, Target::Value(*a), inv, r_eff, opts)?),
                None => None,
            };
            Ok(NevRow {
                r,
                r_eff,
                poles: pc,
                values: vc,
            })
        })
        .collect();
    Ok(NevTable {
        model: f.summary(),
        value: value.map(|a| [a.re, a.im]),
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// `n` radii, logarithmically spaced from `r0` to `r1`.
pub fn log_grid(r0: f64, r1: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![r0];
    }
    let (a, b) = (r0.ln(), r1.ln());
    (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect()
}

/// Default grid: 24 radii, tied to the cell size for elliptic models and
/// capped so that at most about `10^6` lattice points are enumerated.
pub fn default_grid(f: &FunctionModel) -> Vec<f64> {
    match f {
        FunctionModel::Elliptic(m) => {
            let lat = m.lattice();
            let d = (lat.w1 + lat.w2).norm().max((lat.w1 - lat.w2).norm());
            let cap = (1e6 * lat.area() / PI).sqrt();
            log_grid(2.0 * d, (20.0 * d).min(cap), 24)
        }
        FunctionModel::PolyOf { base, .. } => default_grid(base),
        FunctionModel::Exponential { rho, .. } => log_grid(150.0 / rho.norm() * PI, 1.6e5 / rho.norm() * PI, 24),
        FunctionModel::Rational { .. } => log_grid(2.2e4, 4.8e8, 24),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Weierstrass;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_proximity_is_r() {
        let f = FunctionModel::exponential(c(1.0, 0.0), c(0.0, PI)).unwrap();
        let t = characteristic_table(&f, &[1.0, 10.0, 100.0], Some(c(0.0, 0.0)), &QuadOptions::default()).unwrap();
        for row in &t.rows {
            assert_eq!(row.poles.n, 0);
            assert!((row.poles.m - row.r).abs() < 1e-8 * row.r, "{:?}", row);
            assert!((row.values.as_ref().unwrap().t - row.r).abs() < 1e-8 * row.r);
        }
    }

    #[test]
    fn rational_characteristic() {
        // (z - 1)^2 (z + 2i) / (z - 3)^2: degree 3
        let f = FunctionModel::Rational {
            c: c(1.0, 0.0),
            zeros: vec![(c(1.0, 0.0), 2), (c(0.0, -2.0), 1)],
            poles: vec![(c(3.0, 0.0), 2)],
        };
        let grid = log_grid(10.0, 1e4, 8);
        let t = characteristic_table(&f, &grid, None, &QuadOptions::default()).unwrap();
        let offs: Vec<f64> = t.rows.iter().map(|r| r.poles.t - 3.0 * r.r.ln()).collect();
        let spread = offs.iter().cloned().fold(f64::MIN, f64::max) - offs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 0.1, "{:?}", offs);
    }

    #[test]
    fn n_from_refined_grid() {
        let f = FunctionModel::weierstrass(Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap());
        let r = 9.0;
        let inv = Inventory::new(f.points(Target::Poles, r).unwrap());
        let (_, _, big, _) = inv.counts(r);
        // N(r) = n(0) log r + int_0^r (n(t) - n(0)) dt / t, with n piecewise constant
        // between the points of a refined grid that includes every modulus
        let n0 = inv.counts(1e-9).0 as f64;
        let mut ts: Vec<f64> = log_grid(1e-3, r, 2000);
        ts.extend(inv.moduli().filter(|&a| a > 1e-9));
        ts.sort_by(|a, b| a.total_cmp(b));
        let mut integral = 0.0;
        for w in ts.windows(2) {
            integral += (inv.counts(w[0]).0 as f64 - n0) * (w[1] / w[0]).ln();
        }
        let refined = n0 * r.ln() + integral;
        assert!((refined - big).abs() <= 1e-6 * big, "{} vs {}", refined, big);
    }

    #[test]
    fn quadrature_stable_under_refinement() {
        let f = FunctionModel::weierstrass(Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap());
        let coarse = QuadOptions::default();
        let fine = QuadOptions { arcs: 128, ..coarse };
        for r in [3.3, 7.1] {
            let a = proximity(&|z| f.log_abs(z, Target::Poles), r, &coarse).unwrap();
            let b = proximity(&|z| f.log_abs(z, Target::Poles), r, &fine).unwrap();
            assert!((a - b).abs() <= 1e-8 * a.abs().max(1.0), "{} vs {}", a, b);
        }
    }

    #[test]
    fn jitter_moves_off_singularities() {
        assert_eq!(jitter(5.0, &[4.0]), 5.0);
        let r = jitter(5.0, &[5.0]);
        assert!(r != 5.0 && (r - 5.0).abs() <= 5e-6);
    }
}
