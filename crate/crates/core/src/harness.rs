//! Experiment orchestration: builds the solver and dynamics from a config,
//! runs them, and collects the per-step metrics.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::adapt::Dynamics;
use crate::cbo::{seeded_stream, AdaptiveRun, McboSolver, OracleSolver, StepRecord};
use crate::config::{ExperimentConfig, InitKind};
use crate::error::Result;
use crate::metrics::{front_energy, igd, MetricSeries};
use crate::problems::{BuiltinProblem, FrontOracle, Problem};
use crate::simplex::{
    das_dennis_lattice, lattice_size, sample_uniform_simplex, Weight, WeightEnsemble,
};

/// Stream id for initial weight sampling; solver streams use 0 and 1..=N.
const INIT_STREAM: u64 = u64::MAX;

/// Everything one run produced. Re-running `config` (whose `seed` is the
/// run's own seed) reproduces it exactly, except for `duration_secs`.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub history: Vec<StepRecord>,
    pub metrics: MetricSeries,
    pub decisions: Vec<Vec<f64>>,
    pub duration_secs: f64,
}

impl RunRecord {
    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn final_step(&self) -> &StepRecord {
        self.history
            .last()
            .expect("a run records at least one step")
    }

    pub fn summary(&self) -> Summary {
        let (k, energy, igd) = self.metrics.last().unwrap_or((0, f64::NAN, f64::NAN));
        Summary {
            k,
            final_energy: energy,
            final_igd: igd,
            duration_secs: self.duration_secs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub k: usize,
    pub final_energy: f64,
    pub final_igd: f64,
    pub duration_secs: f64,
}

pub fn initial_weights(cfg: &ExperimentConfig, m: usize) -> Result<WeightEnsemble> {
    let h = cfg.lattice_h_for(m);
    let weights: Vec<Weight> = match cfg.init {
        InitKind::Lattice => das_dennis_lattice(m, h)?,
        InitKind::Uniform => {
            let mut rng = seeded_stream(cfg.seed, INIT_STREAM);
            sample_uniform_simplex(m, lattice_size(m, h), &mut rng)?
        }
    };
    WeightEnsemble::new(weights)
}

pub fn reference_front(cfg: &ExperimentConfig, problem: &BuiltinProblem) -> Result<Vec<Vec<f64>>> {
    let mut rng = seeded_stream(cfg.reference_seed, 0);
    problem.sample_front_reference(cfg.reference_size_for(problem.m()), &mut rng)
}

pub fn compute_metrics(
    cfg: &ExperimentConfig,
    history: &[StepRecord],
    reference: &[Vec<f64>],
) -> Result<MetricSeries> {
    let pot = cfg.metric_potential()?;
    let mut series = MetricSeries::default();
    for rec in history {
        series.push(
            rec.k,
            front_energy(&pot, &rec.fronts)?,
            igd(reference, &rec.fronts)?,
        );
    }
    Ok(series)
}

/// One run with `cfg.seed`; `cfg.repeats` is ignored.
pub fn run_single(cfg: &ExperimentConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let problem = cfg.problem()?;
    let m = problem.m();
    let scalarizer = cfg.scalarizer(&problem)?;
    let adapt = cfg.adapt_config(m)?;
    let weights = initial_weights(cfg, m)?;
    let cbo = cfg.cbo_config();
    let steps = cbo.adaptation_steps();

    let work = || -> Result<(Vec<StepRecord>, Vec<Vec<f64>>)> {
        if cfg.oracle_solver {
            let solver = OracleSolver {
                problem: problem.clone(),
                scalarizer: scalarizer.clone(),
            };
            let mut run =
                AdaptiveRun::new(solver, weights.clone(), adapt.clone(), steps, cfg.seed)?;
            run.run_to_end()?;
            let t = run.into_trajectory();
            Ok((t.history, t.decisions))
        } else {
            let solver = McboSolver::new(
                problem.clone(),
                scalarizer.clone(),
                cbo.clone(),
                weights.len(),
                cfg.seed,
            )?;
            let mut run =
                AdaptiveRun::new(solver, weights.clone(), adapt.clone(), steps, cfg.seed)?;
            run.run_to_end()?;
            let t = run.into_trajectory();
            Ok((t.history, t.decisions))
        }
    };
    let (history, decisions) = with_threads(cfg.threads, work)?;

    let reference = reference_front(cfg, &problem)?;
    let metrics = compute_metrics(cfg, &history, &reference)?;
    Ok(RunRecord {
        config: ExperimentConfig {
            repeats: 1,
            ..cfg.clone()
        },
        history,
        metrics,
        decisions,
        duration_secs: start.elapsed().as_secs_f64(),
    })
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::error::Error::invalid(format!("thread pool: {e}")))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T>(_threads: usize, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f()
}

/// `cfg.repeats` runs with seeds `seed, seed+1, ...`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    (0..cfg.repeats as u64)
        .map(|r| {
            run_single(&ExperimentConfig {
                seed: cfg.seed.wrapping_add(r),
                ..cfg.clone()
            })
        })
        .collect()
}

/// Final energy and IGD medians of one dynamics across the repeats.
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub dynamics: Dynamics,
    /// `None` when the dynamics does not apply to the problem's dimension.
    pub medians: Option<(f64, f64)>,
    pub runs: Vec<RunRecord>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs each dynamics in `set` on the same seeds.
pub fn compare(cfg: &ExperimentConfig, set: &[Dynamics]) -> Result<Vec<CompareRow>> {
    let m = cfg.problem()?.m();
    set.iter()
        .map(|&dynamics| {
            if !dynamics.supports(m) {
                return Ok(CompareRow {
                    dynamics,
                    medians: None,
                    runs: Vec::new(),
                });
            }
            let runs = run_experiment(&ExperimentConfig {
                dynamics,
                ..cfg.clone()
            })?;
            let energies: Vec<f64> = runs.iter().map(|r| r.summary().final_energy).collect();
            let igds: Vec<f64> = runs.iter().map(|r| r.summary().final_igd).collect();
            Ok(CompareRow {
                dynamics,
                medians: Some((median(&energies), median(&igds))),
                runs,
            })
        })
        .collect()
}

pub fn format_compare_table(problem: &str, rows: &[CompareRow]) -> String {
    let mut out = format!("{problem}: median final metrics\n");
    out.push_str(&format!(
        "{:<16} {:>14} {:>14}\n",
        "dynamics", "energy", "igd"
    ));
    for row in rows {
        match row.medians {
            Some((e, g)) => out.push_str(&format!(
                "{:<16} {:>14.6e} {:>14.6e}\n",
                row.dynamics.as_str(),
                e,
                g
            )),
            None => out.push_str(&format!(
                "{:<16} {:>14} {:>14}\n",
                row.dynamics.as_str(),
                "n/a",
                "n/a"
            )),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Setting;
    use crate::error::Error;

    fn quick(problem: &str, dynamics: Dynamics) -> ExperimentConfig {
        ExperimentConfig {
            problem: problem.into(),
            dynamics,
            s_max: 250,
            agents: 6,
            lattice_h: Setting::Fixed(4),
            reference_size: Setting::Fixed(200),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn repeats_use_consecutive_seeds() {
        let cfg = ExperimentConfig {
            repeats: 3,
            seed: 40,
            ..quick("lame2_g2", Dynamics::Pairwise)
        };
        let runs = run_experiment(&cfg).unwrap();
        let seeds: Vec<u64> = runs.iter().map(RunRecord::seed).collect();
        assert_eq!(seeds, vec![40, 41, 42]);
        assert_eq!(runs[0].metrics.len(), 6);
        assert!(runs.iter().all(|r| r.metrics.is_consistent()));
    }

    #[test]
    fn grad_image_on_three_objectives_fails_early() {
        let cfg = quick("lame3_g2", Dynamics::GradImage);
        assert!(
            matches!(run_experiment(&cfg), Err(Error::Config { ref field, .. }) if field == "dynamics")
        );
    }

    #[test]
    fn uniform_init_draws_lattice_count() {
        let cfg = ExperimentConfig {
            init: InitKind::Uniform,
            ..quick("lame3_g2", Dynamics::Fixed)
        };
        let w = initial_weights(&cfg, 3).unwrap();
        assert_eq!(w.len(), 15);
        assert!(w.weights.iter().all(Weight::is_valid));
        assert_eq!(w, initial_weights(&cfg, 3).unwrap());
    }

    #[test]
    fn oracle_mode_runs() {
        let cfg = ExperimentConfig {
            oracle_solver: true,
            ..quick("idtlz1_3", Dynamics::PairwiseNoise)
        };
        let rec = run_single(&cfg).unwrap();
        assert_eq!(rec.history.len(), 6);
        assert_eq!(rec.decisions.len(), 15);
    }

    #[test]
    fn compare_marks_inapplicable_dynamics() {
        let cfg = ExperimentConfig {
            oracle_solver: true,
            repeats: 2,
            ..quick("lame3_g2", Dynamics::Pairwise)
        };
        let rows = compare(&cfg, &Dynamics::ALL).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[1].medians.is_none());
        assert!(rows
            .iter()
            .filter(|r| r.medians.is_some())
            .all(|r| r.runs.len() == 2));
        let table = format_compare_table("lame3_g2", &rows);
        assert_eq!(table.lines().count(), 6);
        assert!(table.contains("n/a"));
    }
}
