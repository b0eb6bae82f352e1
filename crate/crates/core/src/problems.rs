//! Benchmark problems with analytic Pareto fronts: the Lamé superspheres
//! (curvature `gamma`) and the inverted DTLZ1 triangle.
//!
//! Every built-in problem has `d = m` decision variables on `[0,1]^d`, the last
//! of which is the distance variable; the front is reached exactly when the
//! distance term `g` vanishes.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::simplex::{sample_uniform_simplex, Weight};

/// Weights below this are clamped before the closed-form Chebyshev solution.
pub const ORACLE_WEIGHT_FLOOR: f64 = 1e-12;

/// The evaluation interface the solvers need.
pub trait Problem: Sync {
    fn name(&self) -> String;
    /// Number of objectives.
    fn m(&self) -> usize;
    /// Decision dimension; the box is `[0,1]^d`.
    fn d(&self) -> usize;
    /// Writes `f(x)` into `out` (length `m`).
    fn evaluate_into(&self, x: &[f64], out: &mut [f64]);
    /// Component-wise lower bounds of the objectives over the box.
    fn lower_bounds(&self) -> Vec<f64>;

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m()];
        self.evaluate_into(x, &mut out);
        out
    }
}

/// Analytic knowledge of a problem's Pareto front.
pub trait FrontOracle {
    /// Zero exactly on the front.
    fn front_residual(&self, y: &[f64]) -> f64;
    /// `count` approximately uniform front points.
    fn sample_front_reference(
        &self,
        count: usize,
        rng: &mut dyn rand::RngCore,
    ) -> Result<Vec<Vec<f64>>>;
    /// Front point minimizing `max_l w_l (f_l - ideal_l)`; `ideal <= 0`.
    fn chebyshev_minimizer(&self, w: &Weight, ideal: &[f64]) -> Result<Vec<f64>>;
    /// A decision vector in the box whose image is the given front point.
    fn preimage(&self, y: &[f64]) -> Vec<f64>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum BuiltinProblem {
    Lame { m: usize, gamma: f64 },
    InvertedDtlz1,
}

impl BuiltinProblem {
    pub fn lame(m: usize, gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!(
                "Lamé gamma must be > 0, got {gamma}"
            )));
        }
        if !(2..=3).contains(&m) {
            return Err(Error::UnsupportedDimension(format!(
                "Lamé problems are provided for m in {{2, 3}}, got {m}"
            )));
        }
        Ok(BuiltinProblem::Lame { m, gamma })
    }

    /// Ordered points along the front, for drawing; only for two objectives.
    pub fn front_curve(&self, samples: usize) -> Option<Vec<[f64; 2]>> {
        match *self {
            BuiltinProblem::Lame { m: 2, gamma } => Some(
                (0..=samples)
                    .map(|j| {
                        let mut p = [0.0; 2];
                        lame_front_point(&[FRAC_PI_2 * j as f64 / samples as f64], gamma, &mut p);
                        p
                    })
                    .collect(),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for BuiltinProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinProblem::Lame { m, gamma } => write!(f, "lame{m}_g{gamma}"),
            BuiltinProblem::InvertedDtlz1 => f.write_str("idtlz1_3"),
        }
    }
}

impl FromStr for BuiltinProblem {
    type Err = Error;

    fn from_str(id: &str) -> Result<Self> {
        let bad = || {
            Error::invalid(format!(
                "unknown problem id `{id}` (expected lame<m>_g<gamma> or idtlz1_3)"
            ))
        };
        if id == "idtlz1_3" {
            return Ok(BuiltinProblem::InvertedDtlz1);
        }
        let rest = id.strip_prefix("lame").ok_or_else(bad)?;
        let (m, gamma) = rest.split_once("_g").ok_or_else(bad)?;
        let m: usize = m.parse().map_err(|_| bad())?;
        let gamma: f64 = gamma.parse().map_err(|_| bad())?;
        BuiltinProblem::lame(m, gamma)
    }
}

/// Points of the positive orthant of the unit sphere from `m - 1` angles.
fn sphere_point(angles: &[f64], out: &mut [f64]) {
    let m = out.len();
    let mut tail = 1.0;
    for l in (1..m).rev() {
        out[l] = tail * angles[l - 1].sin();
        tail *= angles[l - 1].cos();
    }
    out[0] = tail;
}

fn lame_front_point(angles: &[f64], gamma: f64, out: &mut [f64]) {
    sphere_point(angles, out);
    let e = 2.0 / gamma;
    for v in out.iter_mut() {
        *v = v.max(0.0).powf(e);
    }
}

/// Inverted DTLZ1 distance term for a single distance variable.
fn idtlz1_g(x3: f64) -> f64 {
    let t = x3 - 0.5;
    100.0 * (1.0 + t * t - (20.0 * PI * t).cos())
}

fn bisect_level(mut sum_at: impl FnMut(f64) -> f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = 1.0;
    while sum_at(hi) < 1.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sum_at(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

impl Problem for BuiltinProblem {
    fn name(&self) -> String {
        self.to_string()
    }

    fn m(&self) -> usize {
        match self {
            BuiltinProblem::Lame { m, .. } => *m,
            BuiltinProblem::InvertedDtlz1 => 3,
        }
    }

    fn d(&self) -> usize {
        self.m()
    }

    fn evaluate_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.d());
        match *self {
            BuiltinProblem::Lame { m, gamma } => {
                let mut angles = [0.0; 2];
                for (a, xj) in angles.iter_mut().zip(&x[..m - 1]) {
                    *a = FRAC_PI_2 * xj;
                }
                lame_front_point(&angles[..m - 1], gamma, out);
                let scale = 1.0 + x[m - 1];
                out.iter_mut().for_each(|v| *v *= scale);
            }
            BuiltinProblem::InvertedDtlz1 => {
                let half = 0.5 * (1.0 + idtlz1_g(x[2]));
                let h = [
                    half * x[0] * x[1],
                    half * x[0] * (1.0 - x[1]),
                    half * (1.0 - x[0]),
                ];
                for (o, hl) in out.iter_mut().zip(h) {
                    *o = half - hl;
                }
            }
        }
    }

    fn lower_bounds(&self) -> Vec<f64> {
        vec![0.0; self.m()]
    }
}

impl FrontOracle for BuiltinProblem {
    fn front_residual(&self, y: &[f64]) -> f64 {
        match *self {
            BuiltinProblem::Lame { gamma, .. } => {
                (y.iter().map(|v| v.powf(gamma)).sum::<f64>() - 1.0).abs()
            }
            BuiltinProblem::InvertedDtlz1 => {
                (y.iter().sum::<f64>() - 1.0).abs()
                    + y.iter().map(|v| (v - 0.5).max(0.0)).sum::<f64>()
            }
        }
    }

    fn sample_front_reference(
        &self,
        count: usize,
        rng: &mut dyn rand::RngCore,
    ) -> Result<Vec<Vec<f64>>> {
        if count == 0 {
            return Err(Error::invalid("reference set needs at least one point"));
        }
        match *self {
            BuiltinProblem::Lame { m: 2, gamma } => Ok(sample_lame_curve(gamma, count, rng)),
            BuiltinProblem::Lame { gamma, .. } => Ok(sample_lame_surface(gamma, count, rng)),
            BuiltinProblem::InvertedDtlz1 => {
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    let w = sample_uniform_simplex(3, 1, rng)?
                        .pop()
                        .unwrap()
                        .into_inner();
                    if w.iter().all(|v| *v <= 0.5) {
                        out.push(w);
                    }
                }
                Ok(out)
            }
        }
    }

    fn chebyshev_minimizer(&self, w: &Weight, ideal: &[f64]) -> Result<Vec<f64>> {
        let m = self.m();
        if w.dim() != m || ideal.len() != m {
            return Err(Error::invalid(format!(
                "oracle expects m={m}, got weight {} / ideal {}",
                w.dim(),
                ideal.len()
            )));
        }
        if ideal.iter().any(|y| *y > 0.0 || !y.is_finite()) {
            return Err(Error::invalid(
                "oracle solver needs a finite ideal point <= 0",
            ));
        }
        let wt: Vec<f64> = w
            .as_slice()
            .iter()
            .map(|v| v.max(ORACLE_WEIGHT_FLOOR))
            .collect();
        let at_level = |t: f64| -> Vec<f64> {
            wt.iter()
                .zip(ideal)
                .map(|(wl, yl)| (yl + t / wl).max(0.0))
                .collect()
        };
        match *self {
            BuiltinProblem::Lame { gamma, .. } => {
                let t = if ideal.iter().all(|y| *y == 0.0) {
                    wt.iter()
                        .map(|v| v.powf(-gamma))
                        .sum::<f64>()
                        .powf(-1.0 / gamma)
                } else {
                    bisect_level(|t| at_level(t).iter().map(|v| v.powf(gamma)).sum())
                };
                Ok(at_level(t))
            }
            BuiltinProblem::InvertedDtlz1 => {
                let capped =
                    |t: f64| -> Vec<f64> { at_level(t).into_iter().map(|v| v.min(0.5)).collect() };
                let t = bisect_level(|t| capped(t).iter().sum());
                let mut f = capped(t);
                // absorb the bisection gap into the uncapped coordinates
                let excess = f.iter().sum::<f64>() - 1.0;
                let free: Vec<usize> = (0..3).filter(|&l| f[l] > 0.0 && f[l] < 0.5).collect();
                if !free.is_empty() {
                    for &l in &free {
                        f[l] = (f[l] - excess / free.len() as f64).clamp(0.0, 0.5);
                    }
                }
                Ok(f)
            }
        }
    }

    fn preimage(&self, y: &[f64]) -> Vec<f64> {
        match *self {
            BuiltinProblem::Lame { m, gamma } => {
                let s: Vec<f64> = y.iter().map(|v| v.max(0.0).powf(gamma / 2.0)).collect();
                let mut x = vec![0.0; m];
                for l in (1..m).rev() {
                    let head = s[..l].iter().map(|v| v * v).sum::<f64>().sqrt();
                    x[l - 1] = (s[l].atan2(head) / FRAC_PI_2).clamp(0.0, 1.0);
                }
                x
            }
            BuiltinProblem::InvertedDtlz1 => {
                let h: Vec<f64> = y.iter().map(|v| (0.5 - v).max(0.0)).collect();
                let x1 = (1.0 - 2.0 * h[2]).clamp(0.0, 1.0);
                let x2 = if h[0] + h[1] > 0.0 {
                    h[0] / (h[0] + h[1])
                } else {
                    0.5
                };
                vec![x1, x2, 0.5]
            }
        }
    }
}

/// Length-weighted sampling along a fine angle grid of the 2-objective front.
fn sample_lame_curve(gamma: f64, count: usize, rng: &mut dyn rand::RngCore) -> Vec<Vec<f64>> {
    const SEGMENTS: usize = 8192;
    let point = |theta: f64| {
        let mut p = [0.0; 2];
        lame_front_point(&[theta], gamma, &mut p);
        p
    };
    let mut cumulative = Vec::with_capacity(SEGMENTS);
    let mut total = 0.0;
    let mut prev = point(0.0);
    for j in 1..=SEGMENTS {
        let next = point(FRAC_PI_2 * j as f64 / SEGMENTS as f64);
        total += ((next[0] - prev[0]).powi(2) + (next[1] - prev[1]).powi(2)).sqrt();
        cumulative.push(total);
        prev = next;
    }
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let seg = cumulative.partition_point(|c| *c < u).min(SEGMENTS - 1);
            let theta = FRAC_PI_2 * (seg as f64 + rng.random::<f64>()) / SEGMENTS as f64;
            point(theta).to_vec()
        })
        .collect()
}

/// Area-weighted sampling over a triangulated angle grid of the 3-objective front.
fn sample_lame_surface(gamma: f64, count: usize, rng: &mut dyn rand::RngCore) -> Vec<Vec<f64>> {
    const CELLS: usize = 256;
    let step = FRAC_PI_2 / CELLS as f64;
    let point = |a: f64, b: f64| {
        let mut p = [0.0; 3];
        lame_front_point(&[a, b], gamma, &mut p);
        p
    };
    let grid: Vec<[f64; 3]> = (0..=CELLS)
        .flat_map(|i| (0..=CELLS).map(move |j| (i, j)))
        .map(|(i, j)| point(i as f64 * step, j as f64 * step))
        .collect();
    let at = |i: usize, j: usize| grid[i * (CELLS + 1) + j];
    let area = |p: [f64; 3], q: [f64; 3], r: [f64; 3]| {
        let u = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
        let v = [r[0] - p[0], r[1] - p[1], r[2] - p[2]];
        let c = [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ];
        0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
    };
    // triangle t = 2 * (i * CELLS + j) + {0: lower, 1: upper}
    let mut cumulative = Vec::with_capacity(2 * CELLS * CELLS);
    let mut total = 0.0;
    for i in 0..CELLS {
        for j in 0..CELLS {
            total += area(at(i, j), at(i + 1, j), at(i, j + 1));
            cumulative.push(total);
            total += area(at(i + 1, j + 1), at(i, j + 1), at(i + 1, j));
            cumulative.push(total);
        }
    }
    (0..count)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let t = cumulative
                .partition_point(|c| *c < u)
                .min(cumulative.len() - 1);
            let (cell, upper) = (t / 2, t % 2 == 1);
            let (i, j) = (cell / CELLS, cell % CELLS);
            let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
            if a + b > 1.0 {
                a = 1.0 - a;
                b = 1.0 - b;
            }
            let (da, db) = if upper { (1.0 - a, 1.0 - b) } else { (a, b) };
            point((i as f64 + da) * step, (j as f64 + db) * step).to_vec()
        })
        .collect()
}
