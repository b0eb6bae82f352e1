//! Front quality measures: potential-energy diversity and IGD.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{ensemble_energy, Potential};

/// Energy and IGD of the computed front at each adaptation step.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricSeries {
    pub k: Vec<usize>,
    pub energy: Vec<f64>,
    pub igd: Vec<f64>,
}

impl MetricSeries {
    pub fn push(&mut self, k: usize, energy: f64, igd: f64) {
        self.k.push(k);
        self.energy.push(energy);
        self.igd.push(igd);
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.energy.len() == self.k.len()
            && self.igd.len() == self.k.len()
            && self
                .energy
                .iter()
                .chain(&self.igd)
                .all(|v| v.is_finite() && *v >= 0.0)
    }

    pub fn last(&self) -> Option<(usize, f64, f64)> {
        let i = self.k.len().checked_sub(1)?;
        Some((self.k[i], self.energy[i], self.igd[i]))
    }
}

/// Mean over the reference points of the Euclidean distance to the nearest solution.
pub fn igd(reference: &[Vec<f64>], solutions: &[Vec<f64>]) -> Result<f64> {
    if reference.is_empty() || solutions.is_empty() {
        return Err(Error::invalid(
            "IGD needs nonempty reference and solution sets",
        ));
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            solutions
                .iter()
                .map(|s| r.iter().zip(s).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    Ok(total / reference.len() as f64)
}

/// Potential energy of the computed front (self-pairs excluded).
pub fn front_energy(potential: &Potential, solutions: &[Vec<f64>]) -> Result<f64> {
    ensemble_energy(potential, solutions)
}
