//! Radially symmetric repulsive kernels and the empirical potential energy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    /// `exp(-c |z|)`
    Morse { c: f64 },
    /// `|z|^(-s)`
    Riesz { s: f64 },
}

impl Default for Potential {
    fn default() -> Self {
        Potential::Morse { c: 30.0 }
    }
}

pub(crate) fn norm(z: &[f64]) -> f64 {
    z.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl Potential {
    pub fn morse(c: f64) -> Result<Self> {
        Potential::Morse { c }.validated()
    }

    pub fn riesz(s: f64) -> Result<Self> {
        Potential::Riesz { s }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let param = match self {
            Potential::Morse { c } => c,
            Potential::Riesz { s } => s,
        };
        if param.is_finite() && param > 0.0 {
            Ok(self)
        } else {
            Err(Error::invalid(format!(
                "potential parameter must be > 0, got {param}"
            )))
        }
    }

    /// Kernel as a function of the separation length.
    pub fn radial_value(&self, r: f64) -> Result<f64> {
        match *self {
            Potential::Morse { c } => Ok((-c * r).exp()),
            Potential::Riesz { .. } if r == 0.0 => Err(Error::Singularity),
            Potential::Riesz { s } => Ok(r.powf(-s)),
        }
    }

    pub fn value(&self, z: &[f64]) -> Result<f64> {
        self.radial_value(norm(z))
    }

    /// Derivative of the radial profile; exactly 0 at `r = 0` for every kernel.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        match *self {
            Potential::Morse { c } => -c * (-c * r).exp(),
            Potential::Riesz { s } => -s * r.powf(-s - 1.0),
        }
    }

    /// `DU(|z|) z / |z|`, and the zero vector at `z = 0`.
    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let r = norm(z);
        if r == 0.0 {
            return vec![0.0; z.len()];
        }
        let scale = self.radial_derivative(r) / r;
        z.iter().map(|x| scale * x).collect()
    }
}

/// Mean pairwise kernel value `(1/N^2) sum_{i != j} U(p_i - p_j)` of the
/// empirical measure; self-pairs are left out.
///
/// Pairs are summed in a fixed order so the result is reproducible.
pub fn ensemble_energy(potential: &Potential, points: &[Vec<f64>]) -> Result<f64> {
    let n = points.len();
    if n == 0 {
        return Err(Error::invalid("energy of an empty configuration"));
    }
    let mut total = 0.0;
    let mut diff = vec![0.0; points[0].len()];
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if b.len() != a.len() {
                return Err(Error::invalid("points must share a dimension"));
            }
            for ((d, x), y) in diff.iter_mut().zip(a).zip(b) {
                *d = x - y;
            }
            total += potential.value(&diff)?;
        }
    }
    // each unordered pair appears twice in the double sum
    Ok(2.0 * total / (n * n) as f64)
}
