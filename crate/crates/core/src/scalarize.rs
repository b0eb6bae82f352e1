//! Weighted l_p semi-norm scalarization about an ideal point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::simplex::Weight;

/// `S(f, w) = (sum_l w_l |f_l - ideal_l|^p)^(1/p)`, with the Chebyshev form
/// `max_l w_l |f_l - ideal_l|` when `p` is infinite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scalarizer {
    p: f64,
    ideal: Vec<f64>,
}

impl Scalarizer {
    pub fn new(p: f64, ideal: Vec<f64>) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::invalid(format!(
                "scalarization exponent p must be >= 1, got {p}"
            )));
        }
        if ideal.iter().any(|y| !y.is_finite()) {
            return Err(Error::invalid("ideal point must be finite"));
        }
        Ok(Scalarizer { p, ideal })
    }

    pub fn chebyshev(ideal: Vec<f64>) -> Result<Self> {
        Self::new(f64::INFINITY, ideal)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_chebyshev(&self) -> bool {
        self.p.is_infinite()
    }

    pub fn ideal(&self) -> &[f64] {
        &self.ideal
    }

    pub fn scalarize(&self, fval: &[f64], w: &Weight) -> Result<f64> {
        let m = self.ideal.len();
        if fval.len() != m || w.dim() != m {
            return Err(Error::invalid(format!(
                "dimension mismatch: ideal has {m}, objective {}, weight {}",
                fval.len(),
                w.dim()
            )));
        }
        Ok(self.scalarize_unchecked(fval, w.as_slice()))
    }

    /// Hot-path variant for the solvers; lengths are the caller's responsibility.
    #[inline]
    pub(crate) fn scalarize_unchecked(&self, fval: &[f64], w: &[f64]) -> f64 {
        let terms = fval
            .iter()
            .zip(&self.ideal)
            .zip(w)
            .map(|((f, y), wl)| (wl, (f - y).abs()));
        if self.p.is_infinite() {
            terms.map(|(wl, a)| wl * a).fold(0.0, f64::max)
        } else if self.p == 1.0 {
            terms.map(|(wl, a)| wl * a).sum()
        } else {
            terms
                .map(|(wl, a)| wl * a.powf(self.p))
                .sum::<f64>()
                .powf(1.0 / self.p)
        }
    }
}

/// The problem's analytic lower bounds shifted down by the utopian offset.
pub fn default_ideal<P: Problem + ?Sized>(problem: &P, offset: f64) -> Vec<f64> {
    problem.lower_bounds().iter().map(|b| b - offset).collect()
}
