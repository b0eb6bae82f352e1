//! Weight-adaptation dynamics on the simplex.
//!
//! All variants read the step-`k` state and write a fresh step-`k+1`
//! ensemble; forces between sub-problems are measured on their images in
//! objective space.
//!
//! * [`Dynamics::GradImage`]: `W_i += tau/N sum_j grad U(F_i - F_j)`, then project (m = 2 only).
//! * [`Dynamics::Pairwise`]: `W_i -= tau/N sum_j DU(|F_i - F_j|) (W_i - W_j)/|W_i - W_j|`, then project.
//! * [`Dynamics::PairwiseNoise`]: the pairwise step followed by `+ zeta * N(0, I)` and a second projection.
//! * [`Dynamics::Fixed`]: no adaptation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{norm, Potential};
use crate::simplex::{project_to_simplex, Weight, WeightEnsemble};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    Fixed,
    GradImage,
    Pairwise,
    PairwiseNoise,
}

impl Dynamics {
    pub const ALL: [Dynamics; 4] = [
        Dynamics::Fixed,
        Dynamics::GradImage,
        Dynamics::Pairwise,
        Dynamics::PairwiseNoise,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dynamics::Fixed => "fixed",
            Dynamics::GradImage => "grad-image",
            Dynamics::Pairwise => "pairwise",
            Dynamics::PairwiseNoise => "pairwise-noise",
        }
    }

    pub fn supports(self, m: usize) -> bool {
        self != Dynamics::GradImage || m == 2
    }
}

impl fmt::Display for Dynamics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dynamics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Dynamics::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown dynamics `{s}` (valid: fixed, grad-image, pairwise, pairwise-noise)"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptConfig {
    pub dynamics: Dynamics,
    pub tau: f64,
    pub zeta: f64,
    pub potential: Potential,
}

impl AdaptConfig {
    /// Step length 1e-2, Morse C=30, and the noise scale for `m` objectives.
    pub fn with_defaults(dynamics: Dynamics, m: usize) -> Self {
        AdaptConfig {
            dynamics,
            tau: 1e-2,
            zeta: default_zeta(m),
            potential: Potential::default(),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::invalid(format!("tau must be > 0, got {}", self.tau)));
        }
        if !(self.zeta.is_finite() && self.zeta >= 0.0) {
            return Err(Error::invalid(format!(
                "zeta must be >= 0, got {}",
                self.zeta
            )));
        }
        if self.dynamics == Dynamics::PairwiseNoise && self.zeta <= 0.0 {
            return Err(Error::invalid("pairwise-noise dynamics needs zeta > 0"));
        }
        if !self.dynamics.supports(m) {
            return Err(Error::UnsupportedDimension(format!(
                "grad-image dynamics is only defined for m = 2, got m = {m}"
            )));
        }
        self.potential.validated()?;
        Ok(())
    }
}

pub fn default_zeta(m: usize) -> f64 {
    if m == 2 {
        1e-9
    } else {
        1e-6
    }
}

fn check_fronts(weights: &WeightEnsemble, fronts: &[Vec<f64>]) -> Result<()> {
    if fronts.len() != weights.len() {
        return Err(Error::invalid(format!(
            "{} fronts for {} weights",
            fronts.len(),
            weights.len()
        )));
    }
    if fronts.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("fronts must be finite"));
    }
    Ok(())
}

fn advanced(weights: Vec<Weight>, k: usize) -> WeightEnsemble {
    WeightEnsemble { weights, k: k + 1 }
}

pub fn step_fixed(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    _cfg: &AdaptConfig,
) -> Result<WeightEnsemble> {
    check_fronts(weights, fronts)?;
    Ok(advanced(weights.weights.clone(), weights.k))
}

pub fn step_grad_image(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    cfg: &AdaptConfig,
) -> Result<WeightEnsemble> {
    if weights.dim() != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "grad-image dynamics is only defined for m = 2, got m = {}",
            weights.dim()
        )));
    }
    check_fronts(weights, fronts)?;
    let n = weights.len();
    let scale = cfg.tau / n as f64;
    let mut diff = vec![0.0; fronts[0].len()];
    let out = weights
        .weights
        .iter()
        .zip(fronts)
        .map(|(w, fi)| {
            let mut v = w.as_slice().to_vec();
            for fj in fronts {
                for ((d, a), b) in diff.iter_mut().zip(fi).zip(fj) {
                    *d = a - b;
                }
                for (vl, gl) in v.iter_mut().zip(cfg.potential.gradient(&diff)) {
                    *vl += scale * gl;
                }
            }
            project_to_simplex(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(advanced(out, weights.k))
}

/// Pre-projection pairwise displacement `-(tau/N) sum_j DU(|F_i-F_j|) (W_i-W_j)/|W_i-W_j|`.
pub fn pairwise_displacements(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    cfg: &AdaptConfig,
) -> Vec<Vec<f64>> {
    let n = weights.len();
    let m = weights.dim();
    let scale = cfg.tau / n as f64;
    let mut dw = vec![0.0; m];
    let mut df = vec![0.0; fronts.first().map_or(0, Vec::len)];
    (0..n)
        .map(|i| {
            let wi = weights.weights[i].as_slice();
            let mut disp = vec![0.0; m];
            for j in 0..n {
                if j == i {
                    continue;
                }
                for ((d, a), b) in dw.iter_mut().zip(wi).zip(weights.weights[j].as_slice()) {
                    *d = a - b;
                }
                let rw = norm(&dw);
                if rw == 0.0 {
                    continue;
                }
                for ((d, a), b) in df.iter_mut().zip(&fronts[i]).zip(&fronts[j]) {
                    *d = a - b;
                }
                let force = cfg.potential.radial_derivative(norm(&df));
                for (out, d) in disp.iter_mut().zip(&dw) {
                    *out -= scale * force * d / rw;
                }
            }
            disp
        })
        .collect()
}

pub fn step_pairwise(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    cfg: &AdaptConfig,
) -> Result<WeightEnsemble> {
    check_fronts(weights, fronts)?;
    let out = weights
        .weights
        .iter()
        .zip(pairwise_displacements(weights, fronts, cfg))
        .map(|(w, disp)| {
            let v: Vec<f64> = w.as_slice().iter().zip(&disp).map(|(a, b)| a + b).collect();
            project_to_simplex(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(advanced(out, weights.k))
}

pub fn step_pairwise_noise<R: Rng + ?Sized>(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    cfg: &AdaptConfig,
    rng: &mut R,
) -> Result<WeightEnsemble> {
    if cfg.zeta.is_nan() || cfg.zeta <= 0.0 {
        return Err(Error::invalid("pairwise-noise dynamics needs zeta > 0"));
    }
    let half = step_pairwise(weights, fronts, cfg)?;
    perturb(half, weights.k, cfg.zeta, || rng.sample(StandardNormal))
}

/// Second stage of the noisy dynamics: `Pi(W + zeta * B)` with `B` drawn
/// component by component, sub-problem by sub-problem, from `draw`.
pub(crate) fn perturb(
    half: WeightEnsemble,
    k: usize,
    zeta: f64,
    mut draw: impl FnMut() -> f64,
) -> Result<WeightEnsemble> {
    let out = half
        .weights
        .iter()
        .map(|w| {
            let v: Vec<f64> = w.as_slice().iter().map(|a| a + zeta * draw()).collect();
            project_to_simplex(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(advanced(out, k))
}

/// Dispatches on `cfg.dynamics`. The rng is only consumed by the noisy variant.
pub fn adapt_step<R: Rng + ?Sized>(
    weights: &WeightEnsemble,
    fronts: &[Vec<f64>],
    cfg: &AdaptConfig,
    rng: &mut R,
) -> Result<WeightEnsemble> {
    match cfg.dynamics {
        Dynamics::Fixed => step_fixed(weights, fronts, cfg),
        Dynamics::GradImage => step_grad_image(weights, fronts, cfg),
        Dynamics::Pairwise => step_pairwise(weights, fronts, cfg),
        Dynamics::PairwiseNoise => step_pairwise_noise(weights, fronts, cfg, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ens(ws: &[&[f64]]) -> WeightEnsemble {
        WeightEnsemble::new(
            ws.iter()
                .map(|w| Weight::new(w.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn cfg(dynamics: Dynamics) -> AdaptConfig {
        AdaptConfig::with_defaults(dynamics, 2)
    }

    #[test]
    fn dynamics_names_round_trip() {
        for d in Dynamics::ALL {
            assert_eq!(d.as_str().parse::<Dynamics>().unwrap(), d);
        }
        let err = "gradient".parse::<Dynamics>().unwrap_err().to_string();
        assert!(err.contains("pairwise-noise"));
    }

    #[test]
    fn config_validation() {
        assert!(cfg(Dynamics::GradImage).validate(2).is_ok());
        assert!(matches!(
            cfg(Dynamics::GradImage).validate(3),
            Err(Error::UnsupportedDimension(_))
        ));
        let mut c = cfg(Dynamics::PairwiseNoise);
        c.zeta = 0.0;
        assert!(c.validate(2).is_err());
        c.dynamics = Dynamics::Pairwise;
        assert!(c.validate(2).is_ok());
        c.tau = -1.0;
        assert!(c.validate(2).is_err());
    }

    #[test]
    fn fixed_is_identity_and_counts() {
        let mut w = ens(&[&[0.2, 0.8], &[0.6, 0.4]]);
        w.k = 3;
        let out = step_fixed(&w, &[vec![0.1, 0.9], vec![0.5, 0.5]], &cfg(Dynamics::Fixed)).unwrap();
        assert_eq!(out.weights, w.weights);
        assert_eq!(out.k, 4);
        assert!(out.weights.iter().all(Weight::is_valid));
    }

    #[test]
    fn single_subproblem_is_unchanged() {
        let w = ens(&[&[0.3, 0.7]]);
        let f = [vec![0.4, 0.2]];
        for d in [Dynamics::GradImage, Dynamics::Pairwise] {
            let out = adapt_step(&w, &f, &cfg(d), &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
            assert_eq!(out.weights, w.weights);
            assert_eq!(out.k, 1);
        }
        let out = step_pairwise_noise(
            &w,
            &f,
            &cfg(Dynamics::PairwiseNoise),
            &mut ChaCha8Rng::seed_from_u64(5),
        )
        .unwrap();
        assert!(out.weights[0].is_valid());
    }

    #[test]
    fn identical_fronts_exert_no_force() {
        let w = ens(&[&[0.25, 0.75], &[0.75, 0.25]]);
        let f = [vec![0.3, 0.3], vec![0.3, 0.3]];
        assert_eq!(
            step_grad_image(&w, &f, &cfg(Dynamics::GradImage))
                .unwrap()
                .weights,
            w.weights
        );
        assert_eq!(
            step_pairwise(&w, &f, &cfg(Dynamics::Pairwise))
                .unwrap()
                .weights,
            w.weights
        );
    }

    #[test]
    fn grad_image_two_body_example() {
        let w = ens(&[&[0.25, 0.75], &[0.75, 0.25]]);
        let f = [vec![0.2, 0.8], vec![0.3, 0.7]];
        let out = step_grad_image(&w, &f, &cfg(Dynamics::GradImage)).unwrap();

        // scripted evaluation of the update for W1
        let r = 0.02f64.sqrt();
        let mag = -30.0 * (-30.0 * r).exp();
        let grad = [mag * (-1.0 / 2f64.sqrt()), mag * (1.0 / 2f64.sqrt())];
        let raw = [0.25 + 0.005 * grad[0], 0.75 + 0.005 * grad[1]];
        let expected = project_to_simplex(&raw).unwrap();
        for l in 0..2 {
            assert!((out.weights[0][l] - expected[l]).abs() <= 1e-12);
        }
        // more weight on f1 lowers F1's first objective, away from F2
        assert!(out.weights[0][0] > 0.25);
        assert!(out.weights[1][0] < 0.75);
    }

    #[test]
    fn grad_image_rejects_three_objectives() {
        let w = ens(&[&[0.2, 0.3, 0.5]]);
        assert!(matches!(
            step_grad_image(&w, &[vec![0.0; 3]], &cfg(Dynamics::GradImage)),
            Err(Error::UnsupportedDimension(_))
        ));
    }

    #[test]
    fn pairwise_two_body_example() {
        let w = ens(&[&[0.25, 0.75], &[0.75, 0.25]]);
        let f = [vec![0.0, 0.0], vec![0.06, 0.08]];
        let out = step_pairwise(&w, &f, &cfg(Dynamics::Pairwise)).unwrap();
        let shift = 0.005 * 30.0 * (-3.0f64).exp();
        assert!((shift - 0.0074680).abs() < 1e-7);
        let expected = [0.25 - shift / 2f64.sqrt(), 0.75 + shift / 2f64.sqrt()];
        assert!((out.weights[0][0] - expected[0]).abs() <= 1e-12);
        assert!((out.weights[0][1] - expected[1]).abs() <= 1e-12);
        assert!((out.weights[0][0] - 0.24472).abs() < 1e-5);
        assert!((out.weights[0][1] - 0.75528).abs() < 1e-5);
    }

    #[test]
    fn coincident_weights_exert_no_force() {
        let w = ens(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let f = [vec![0.1, 0.2], vec![0.3, 0.1]];
        assert_eq!(
            step_pairwise(&w, &f, &cfg(Dynamics::Pairwise))
                .unwrap()
                .weights,
            w.weights
        );
    }

    #[test]
    fn zero_noise_matches_pairwise() {
        let w = ens(&[&[0.1, 0.9], &[0.4, 0.6], &[0.8, 0.2]]);
        let f = [vec![0.9, 0.1], vec![0.5, 0.5], vec![0.45, 0.55]];
        let c = cfg(Dynamics::PairwiseNoise);
        let det = step_pairwise(&w, &f, &c).unwrap();
        let noisy = perturb(det.clone(), w.k, c.zeta, || 0.0).unwrap();
        assert_eq!(noisy, det);
    }

    #[test]
    fn projected_noise_statistics() {
        // stage one leaves the barycenter in place (single sub-problem)
        let w = ens(&[&[0.5, 0.5]]);
        let f = [vec![0.5, 0.5]];
        let zeta = 1e-2;
        let mut c = cfg(Dynamics::PairwiseNoise);
        c.zeta = zeta;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 100_000;
        let disp: Vec<f64> = (0..draws)
            .map(|_| {
                let out = step_pairwise_noise(&w, &f, &c, &mut rng).unwrap();
                (out.weights[0][0] - out.weights[0][1]) / 2f64.sqrt()
            })
            .collect();
        let mean = disp.iter().sum::<f64>() / draws as f64;
        let std =
            (disp.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (draws - 1) as f64).sqrt();
        assert!(mean.abs() <= 3.0 * zeta * 1e-2, "mean {mean}");
        assert!((std - zeta).abs() <= 0.05 * zeta, "std {std}");
    }

    fn ensemble_strategy(m: usize) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        (1usize..8).prop_flat_map(move |n| {
            (
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, m), n),
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, m), n),
            )
        })
    }

    fn to_ensemble(raw: &[Vec<f64>]) -> WeightEnsemble {
        WeightEnsemble::new(raw.iter().map(|v| project_to_simplex(v).unwrap()).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn outputs_stay_on_simplex((raw, fronts) in ensemble_strategy(3), seed in any::<u64>()) {
            let w = to_ensemble(&raw);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for d in [Dynamics::Fixed, Dynamics::Pairwise, Dynamics::PairwiseNoise] {
                let mut c = AdaptConfig::with_defaults(d, 3);
                c.tau = 0.5;
                c.zeta = 0.1;
                let out = adapt_step(&w, &fronts, &c, &mut rng).unwrap();
                prop_assert!(out.weights.iter().all(Weight::is_valid));
                prop_assert_eq!(out.k, 1);
            }
        }

        #[test]
        fn grad_image_stays_on_simplex((raw, fronts) in ensemble_strategy(2)) {
            let w = to_ensemble(&raw);
            let mut c = cfg(Dynamics::GradImage);
            c.tau = 0.5;
            let out = step_grad_image(&w, &fronts, &c).unwrap();
            prop_assert!(out.weights.iter().all(Weight::is_valid));
        }

        #[test]
        fn deterministic_dynamics_are_permutation_equivariant(
            (raw, fronts) in ensemble_strategy(2),
            rot in 0usize..8,
        ) {
            let w = to_ensemble(&raw);
            let n = w.len();
            let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
            let wp = WeightEnsemble::new(perm.iter().map(|&i| w.weights[i].clone()).collect()).unwrap();
            let fp: Vec<Vec<f64>> = perm.iter().map(|&i| fronts[i].clone()).collect();
            for d in [Dynamics::GradImage, Dynamics::Pairwise] {
                let c = cfg(d);
                let rng = &mut ChaCha8Rng::seed_from_u64(0);
                let out = adapt_step(&w, &fronts, &c, rng).unwrap();
                let outp = adapt_step(&wp, &fp, &c, rng).unwrap();
                for (a, &i) in perm.iter().enumerate() {
                    for l in 0..2 {
                        prop_assert!((outp.weights[a][l] - out.weights[i][l]).abs() <= 1e-14);
                    }
                }
            }
        }

        #[test]
        fn two_body_forces_are_opposite(raw in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 2), fronts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 2)) {
            let w = to_ensemble(&raw);
            let disp = pairwise_displacements(&w, &fronts, &AdaptConfig::with_defaults(Dynamics::Pairwise, 3));
            for (a, b) in disp[0].iter().zip(&disp[1]) {
                prop_assert!((a + b).abs() <= 1e-15);
            }
        }
    }
}
