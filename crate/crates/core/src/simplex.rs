//! Geometry of the probability simplex: validated weights, Euclidean
//! projection, and the two initializers (Das–Dennis lattice, flat sampling).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on `sum(w) == 1` for a valid weight.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A point of the (m-1)-probability simplex; parameterizes one scalarized sub-problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(Vec<f64>);

impl Weight {
    /// Validates `w` without modifying it.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(Error::invalid(format!(
                "weight needs at least 2 components, got {}",
                w.len()
            )));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::invalid(format!(
                "weight components must be finite and nonnegative: {w:?}"
            )));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::invalid(format!("weight sums to {sum}, expected 1")));
        }
        Ok(Weight(w))
    }

    /// Barycenter of the simplex.
    pub fn uniform(m: usize) -> Self {
        assert!(m >= 2, "simplex dimension must be >= 2");
        Weight(vec![1.0 / m as f64; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// True if the invariants hold (used by trajectory checks).
    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|x| x.is_finite() && *x >= 0.0)
            && (self.0.iter().sum::<f64>() - 1.0).abs() <= SUM_TOLERANCE
    }
}

impl std::ops::Index<usize> for Weight {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// The N sub-problem weights of a run together with the adaptation counter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEnsemble {
    pub weights: Vec<Weight>,
    pub k: usize,
}

impl WeightEnsemble {
    pub fn new(weights: Vec<Weight>) -> Result<Self> {
        let m = match weights.first() {
            Some(w) => w.dim(),
            None => return Err(Error::invalid("weight ensemble must be nonempty")),
        };
        if weights.iter().any(|w| w.dim() != m) {
            return Err(Error::invalid("all weights in an ensemble must share m"));
        }
        Ok(WeightEnsemble { weights, k: 0 })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.weights[0].dim()
    }
}

/// Euclidean projection onto the probability simplex (sort-then-threshold).
///
/// Points already on the simplex are returned unchanged, so the projection is
/// exactly idempotent. The result is renormalized by its sum to absorb rounding.
pub fn project_to_simplex(v: &[f64]) -> Result<Weight> {
    if v.len() < 2 {
        return Err(Error::invalid("projection needs m >= 2"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!(
            "cannot project non-finite vector {v:?}"
        )));
    }
    if v.iter().all(|x| *x >= 0.0) && (v.iter().sum::<f64>() - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Ok(Weight(v.to_vec()));
    }

    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }

    let mut w: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    let sum: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= sum);
    Ok(Weight(w))
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of Das–Dennis lattice points, `C(h + m - 1, m - 1)`.
pub fn lattice_size(m: usize, h: usize) -> usize {
    binomial(h + m - 1, m - 1)
}

/// All simplex points whose coordinates are multiples of `1/h`, in
/// lexicographic order.
pub fn das_dennis_lattice(m: usize, h: usize) -> Result<Vec<Weight>> {
    if m < 2 || h < 1 {
        return Err(Error::invalid(format!(
            "lattice needs m >= 2 and H >= 1 (got m={m}, H={h})"
        )));
    }
    let mut out = Vec::with_capacity(lattice_size(m, h));
    let mut counts = vec![0usize; m];
    fill_lattice(&mut counts, 0, h, h, &mut out);
    Ok(out)
}

fn fill_lattice(counts: &mut [usize], pos: usize, left: usize, h: usize, out: &mut Vec<Weight>) {
    let m = counts.len();
    if pos == m - 1 {
        counts[pos] = left;
        out.push(Weight(
            counts.iter().map(|&c| c as f64 / h as f64).collect(),
        ));
        return;
    }
    for c in 0..=left {
        counts[pos] = c;
        fill_lattice(counts, pos + 1, left - c, h, out);
    }
}

/// `n` independent draws from the flat distribution on the simplex (sorted
/// uniform spacings).
pub fn sample_uniform_simplex<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<Weight>> {
    if m < 2 || n < 1 {
        return Err(Error::invalid(format!(
            "uniform simplex sampling needs m >= 2 and N >= 1 (got m={m}, N={n})"
        )));
    }
    let mut cuts = vec![0.0; m + 1];
    let out = (0..n)
        .map(|_| {
            cuts[0] = 0.0;
            cuts[m] = 1.0;
            for c in cuts[1..m].iter_mut() {
                *c = rng.random::<f64>();
            }
            cuts[1..m].sort_by(f64::total_cmp);
            let mut w: Vec<f64> = cuts.windows(2).map(|p| p[1] - p[0]).collect();
            let sum: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= sum);
            Weight(w)
        })
        .collect();
    Ok(out)
}
