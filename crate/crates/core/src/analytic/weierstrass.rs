//! Weierstrass `℘` from its invariants.
//!
//! Near the origin a 20-term Laurent series is summed; larger arguments are
//! halved into the series disc and doubled back. Periods come from Carlson's
//! `R_F` and are polished by Newton iteration on `℘′`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_TERMS: usize = 20;

/// Carlson's symmetric integral `R_F(x, y, z)` for complex arguments off the negative real axis.
pub fn carlson_rf(x: Complex64, y: Complex64, z: Complex64) -> Result<Complex64> {
    let (mut x, mut y, mut z) = (x, y, z);
    let zeros = [x, y, z].iter().filter(|v| v.norm() == 0.0).count();
    if zeros > 1 {
        return Err(Error::Numeric("R_F needs at most one zero argument".into()));
    }
    for _ in 0..200 {
        let mu = (x + y + z) / 3.0;
        let dx = 1.0 - x / mu;
        let dy = 1.0 - y / mu;
        let dz = 1.0 - z / mu;
        if dx.norm().max(dy.norm()).max(dz.norm()) < 1e-3 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) / 4.0;
        y = (y + lam) / 4.0;
        z = (z + lam) / 4.0;
    }
    Err(Error::Numeric("R_F iteration did not converge".into()))
}

/// Laurent coefficients `c_k` of `℘(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)`, index `k - 2`.
pub fn laurent_coeffs(g2: Complex64, g3: Complex64, terms: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); terms.max(2) + 2];
    c[2] = g2 / 20.0;
    c[3] = g3 / 28.0;
    for k in 4..c.len() {
        let mut s = Complex64::new(0.0, 0.0);
        for m in 2..=k - 2 {
            s += c[m] * c[k - m];
        }
        c[k] = s * 3.0 / (((2 * k + 1) * (k - 3)) as f64);
    }
    c.drain(..2);
    c.truncate(terms);
    c
}

/// Roots of `4x^3 - g2 x - g3`, polished by Newton.
fn cubic_roots(g2: Complex64, g3: Complex64) -> [Complex64; 3] {
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let mut u3 = -q / 2.0 + disc;
    if u3.norm() < (-q / 2.0 - disc).norm() {
        u3 = -q / 2.0 - disc;
    }
    let u = u3.powf(1.0 / 3.0);
    let rot = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let uk = u * rot.powi(k as i32);
        let mut x = if uk.norm() == 0.0 { uk } else { uk - p / (3.0 * uk) };
        for _ in 0..4 {
            let f = 4.0 * x * x * x - g2 * x - g3;
            let df = 12.0 * x * x - g2;
            if df.norm() == 0.0 {
                break;
            }
            x -= f / df;
        }
        *slot = x;
    }
    out
}

fn lattice_coords(z: Complex64, v1: Complex64, v2: Complex64) -> (f64, f64) {
    let det = (v1.conj() * v2).im;
    let s = (z.conj() * v2).im / det;
    let t = (v1.conj() * z).im / det;
    (s, t)
}

/// Gauss reduction of a lattice basis.
pub fn reduce_basis(mut v1: Complex64, mut v2: Complex64) -> (Complex64, Complex64) {
    loop {
        if v2.norm() < v1.norm() {
            std::mem::swap(&mut v1, &mut v2);
        }
        let m = ((v2 * v1.conj()).re / v1.norm_sqr()).round();
        if m == 0.0 {
            break;
        }
        v2 -= v1 * m;
    }
    if (v1.conj() * v2).im < 0.0 {
        v2 = -v2;
    }
    (v1, v2)
}

/// Reduced period lattice basis.
#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    pub w1: Complex64,
    pub w2: Complex64,
}

impl Lattice {
    pub fn new(a: Complex64, b: Complex64) -> Self {
        let (w1, w2) = reduce_basis(a, b);
        Lattice { w1, w2 }
    }

    pub fn area(&self) -> f64 {
        (self.w1.conj() * self.w2).im.abs()
    }

    pub fn scaled(&self, by: Complex64) -> Self {
        Lattice::new(self.w1 * by, self.w2 * by)
    }

    /// Nearest lattice point to `z`.
    pub fn nearest(&self, z: Complex64) -> Complex64 {
        let (s, t) = lattice_coords(z, self.w1, self.w2);
        let (s, t) = (s.round(), t.round());
        let mut best = self.w1 * s + self.w2 * t;
        for ds in -1..=1 {
            for dt in -1..=1 {
                let p = self.w1 * (s + ds as f64) + self.w2 * (t + dt as f64);
                if (z - p).norm() < (z - best).norm() {
                    best = p;
                }
            }
        }
        best
    }

    /// Points `shift + lattice` with modulus at most `r`.
    pub fn points_within(&self, shift: Complex64, r: f64) -> Vec<Complex64> {
        let det = self.area();
        let reach = r + shift.norm();
        let ms = (reach * self.w2.norm() / det).ceil() as i64 + 1;
        let ns = (reach * self.w1.norm() / det).ceil() as i64 + 1;
        let mut out = Vec::new();
        for m in -ms..=ms {
            for n in -ns..=ns {
                let p = shift + self.w1 * m as f64 + self.w2 * n as f64;
                if p.norm() <= r {
                    out.push(p);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Weierstrass {
    pub g2: Complex64,
    pub g3: Complex64,
    coeffs: Vec<Complex64>,
    r0: f64,
    pub roots: [Complex64; 3],
    pub lattice: Lattice,
}

impl Weierstrass {
    pub fn new(g2: Complex64, g3: Complex64) -> Result<Self> {
        let disc = g2 * g2 * g2 - 27.0 * g3 * g3;
        let scale = g2.norm().powi(3).max(27.0 * g3.norm_sqr());
        if disc.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
            return Err(Error::Numeric("discriminant g2^3 - 27 g3^2 vanishes".into()));
        }
        let coeffs = laurent_coeffs(g2, g3, SERIES_TERMS);
        // radius of convergence estimated from coefficient growth
        let radius = coeffs
            .iter()
            .enumerate()
            .skip(6)
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(i, c)| c.norm().powf(-1.0 / (2 * (i + 2)) as f64))
            .fold(f64::INFINITY, f64::min);
        let radius = if radius.is_finite() { radius } else { 1.0 };
        let roots = cubic_roots(g2, g3);
        let mut wp = Weierstrass {
            g2,
            g3,
            coeffs,
            r0: 0.3 * radius,
            roots,
            lattice: Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)),
        };
        wp.lattice = wp.find_lattice()?;
        Ok(wp)
    }

    fn series(&self, u: Complex64) -> (Complex64, Complex64) {
        let u2 = u * u;
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0); // u^(2k-4)
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = i + 2;
            pow *= u2;
            // pow = u^(2k-2)
            p += c * pow;
            dp += c * pow * ((2 * k - 2) as f64) / u;
        }
        (1.0 / u2 + p, -2.0 / (u2 * u) + dp)
    }

    /// `(℘, ℘′)` by halving and doubling, without lattice reduction.
    fn raw(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut n = 0;
        let mut u = z;
        while u.norm() > self.r0 {
            u /= 2.0;
            n += 1;
        }
        let (mut p, mut dp) = self.series(u);
        for _ in 0..n {
            let ddp = 6.0 * p * p - self.g2 / 2.0;
            let h = ddp / dp;
            let p2 = h * h / 4.0 - 2.0 * p;
            let dp2 = h * (12.0 * p - h * h) / 4.0 - dp;
            p = p2;
            dp = dp2;
        }
        (p, dp)
    }

    /// `(℘(z), ℘′(z))`; lattice points give a pole error.
    pub fn eval(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let u = z - self.lattice.nearest(z);
        if u.norm() <= 1e-14 * self.lattice.w1.norm() {
            return Err(Error::Pole(format!("{}", z)));
        }
        Ok(self.raw(u))
    }

    pub fn wp(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z).map(|v| v.0)
    }

    fn newton_half_period(&self, mut u: Complex64) -> Option<Complex64> {
        for _ in 0..60 {
            let (p, dp) = self.raw(u);
            let ddp = 6.0 * p * p - self.g2 / 2.0;
            if !ddp.is_finite() || ddp.norm() == 0.0 {
                return None;
            }
            let step = dp / ddp;
            u -= step;
            if step.norm() <= 1e-15 * u.norm() {
                break;
            }
        }
        let (p, dp) = self.raw(u);
        let scale = 1.0 + p.norm().powf(1.5);
        (dp.norm() <= 1e-9 * scale && u.norm() > 0.0).then_some(u)
    }

    fn is_period(&self, v: Complex64) -> bool {
        let probes = [Complex64::new(0.137, 0.071), Complex64::new(-0.093, 0.117)];
        probes.iter().all(|&z0| {
            let z0 = z0 * self.r0;
            let a = self.raw(z0).0;
            let b = self.raw(z0 + v).0;
            (a - b).norm() <= 1e-7 * (1.0 + a.norm())
        })
    }

    fn find_lattice(&self) -> Result<Lattice> {
        let e = self.roots;
        let mut cands = Vec::new();
        for i in 0..3 {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let (d1, d2) = (e[i] - e[j], e[i] - e[k]);
            let zero = Complex64::new(0.0, 0.0);
            let i_unit = Complex64::new(0.0, 1.0);
            for g in [carlson_rf(zero, d1, d2), carlson_rf(zero, -d1, -d2).map(|v| v * i_unit)]
                .into_iter()
                .flatten()
            {
                if g.is_finite() {
                    if let Some(u) = self.newton_half_period(g) {
                        cands.push(2.0 * u);
                    }
                }
            }
        }
        cands.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        let v1 = *cands.first().ok_or_else(|| Error::Numeric("no period found".into()))?;
        let v2 = cands
            .iter()
            .copied()
            .find(|v| (v / v1).im.abs() > 1e-6)
            .ok_or_else(|| Error::Numeric("periods are collinear".into()))?;
        let mut lat = Lattice::new(v1, v2);
        // candidates may span a sublattice of odd index
        'refine: loop {
            for k in [3u32, 5, 7] {
                for i in 0..k {
                    for j in 0..k {
                        if i == 0 && j == 0 {
                            continue;
                        }
                        let v = (lat.w1 * i as f64 + lat.w2 * j as f64) / k as f64;
                        if self.is_period(v) {
                            lat = if (v / lat.w1).im.abs() > 1e-9 {
                                Lattice::new(lat.w1, v)
                            } else {
                                Lattice::new(v, lat.w2)
                            };
                            continue 'refine;
                        }
                    }
                }
            }
            break;
        }
        Ok(lat)
    }

    /// A solution `u` of `℘(u) = c`; the full solution set is `±u + lattice`.
    pub fn inverse(&self, c: Complex64) -> Result<Complex64> {
        let mut starts = Vec::new();
        let e = self.roots;
        if let Ok(g) = carlson_rf(c - e[0], c - e[1], c - e[2]) {
            starts.push(g);
        }
        for a in 1..8 {
            for b in 1..8 {
                starts.push(self.lattice.w1 * (a as f64 / 8.0) + self.lattice.w2 * (b as f64 / 8.0));
            }
        }
        for s in starts {
            let mut u = s;
            for _ in 0..80 {
                let Ok((p, dp)) = self.eval(u) else { break };
                if dp.norm() == 0.0 {
                    break;
                }
                let step = (p - c) / dp;
                u -= step;
                if step.norm() <= 1e-15 * (1.0 + u.norm()) {
                    break;
                }
            }
            if let Ok(p) = self.wp(u) {
                if (p - c).norm() <= 1e-9 * (1.0 + c.norm()) {
                    return Ok(u);
                }
            }
        }
        Err(Error::Numeric(format!("℘(u) = {} not solved", c)))
    }
}

/// `(℘(z), ℘′(z))` for invariants `g2`, `g3`.
pub fn wp_eval(z: Complex64, g2: Complex64, g3: Complex64) -> Result<(Complex64, Complex64)> {
    Weierstrass::new(g2, g3)?.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn laurent_recursion_matches_known_terms() {
        let (g2, g3) = (c(2.0, 0.5), c(-1.0, 0.3));
        let k = laurent_coeffs(g2, g3, 5);
        assert!((k[0] - g2 / 20.0).norm() < 1e-15);
        assert!((k[1] - g3 / 28.0).norm() < 1e-15);
        assert!((k[2] - g2 * g2 / 1200.0).norm() < 1e-15);
        assert!((k[3] - 3.0 * g2 * g3 / 6160.0).norm() < 1e-15);
    }

    #[test]
    fn carlson_lemniscate() {
        // R_F(0, 1, 2) = Gamma(1/4)^2 / (4 sqrt(2 pi))
        let v = carlson_rf(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((v.re - 1.311_028_777_146_059_9).abs() < 1e-14);
    }

    #[test]
    fn differential_equation_and_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (g2, g3) in [(c(2.0, 0.0), c(1.0, 0.0)), (c(1.0, 2.0), c(-0.5, 0.25)), (c(4.0, 0.0), c(0.0, 0.0))] {
            let wp = Weierstrass::new(g2, g3).unwrap();
            for _ in 0..100 {
                let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let Ok((p, dp)) = wp.eval(z) else { continue };
                let res = (dp * dp - (4.0 * p * p * p - g2 * p - g3)).norm();
                assert!(res <= 1e-10 * (1.0 + p.norm().powi(3)), "{} at {}", res, z);
                let (pm, dpm) = wp.eval(-z).unwrap();
                assert!((pm - p).norm() <= 1e-12 * (1.0 + p.norm()));
                assert!((dpm + dp).norm() <= 1e-12 * (1.0 + dp.norm()));
            }
        }
    }

    #[test]
    fn double_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let wp = Weierstrass::new(c(1.0, 2.0), c(-0.5, 0.25)).unwrap();
        for _ in 0..50 {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let a = wp.raw(z).0;
            for w in [wp.lattice.w1, wp.lattice.w2] {
                let b = wp.raw(z + w).0;
                assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn half_periods_hit_roots() {
        let wp = Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        for h in [wp.lattice.w1 / 2.0, wp.lattice.w2 / 2.0, (wp.lattice.w1 + wp.lattice.w2) / 2.0] {
            let p = wp.wp(h).unwrap();
            assert!(wp.roots.iter().any(|e| (e - p).norm() < 1e-9), "{}", p);
        }
    }

    #[test]
    fn lattice_point_is_a_pole() {
        let wp = Weierstrass::new(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(matches!(wp.eval(wp.lattice.w1 * 2.0 + wp.lattice.w2), Err(Error::Pole(_))));
        assert!(Weierstrass::new(c(3.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let wp = Weierstrass::new(c(1.0, 2.0), c(-0.5, 0.25)).unwrap();
        for target in [c(0.0, 0.0), c(1.0, -1.0), c(10.0, 3.0)] {
            let u = wp.inverse(target).unwrap();
            assert!((wp.wp(u).unwrap() - target).norm() < 1e-9);
        }
    }
}
