//! WebAssembly bindings for the browser demo in `www/`.

use wasm_bindgen::prelude::*;

use scalarep::adapt::Dynamics;
use scalarep::cbo::{AdaptiveRun, McboSolver, OracleSolver};
use scalarep::config::{ExperimentConfig, Setting};
use scalarep::harness::{initial_weights, reference_front};
use scalarep::metrics::{front_energy, igd};
use scalarep::problems::{BuiltinProblem, Problem};
use scalarep::Potential;

const REFERENCE_SIZE: usize = 600;

fn js_err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

enum Runner {
    Oracle(AdaptiveRun<OracleSolver<BuiltinProblem>>),
    Swarm(AdaptiveRun<McboSolver<BuiltinProblem>>),
}

/// One adaptive run that the page steps through interactively.
#[wasm_bindgen]
pub struct Demo {
    runner: Runner,
    problem: BuiltinProblem,
    metric: Potential,
    reference: Vec<Vec<f64>>,
}

#[wasm_bindgen]
impl Demo {
    /// `solver` is `"oracle"` (exact front) or `"cbo"` (particle swarm).
    #[wasm_bindgen(constructor)]
    pub fn new(problem: &str, dynamics: &str, solver: &str, seed: u64) -> Result<Demo, JsValue> {
        let dynamics: Dynamics = dynamics.parse().map_err(js_err)?;
        let oracle = match solver {
            "oracle" => true,
            "cbo" => false,
            other => return Err(js_err(format!("unknown solver `{other}` (oracle, cbo)"))),
        };
        let cfg = ExperimentConfig {
            problem: problem.into(),
            dynamics,
            oracle_solver: oracle,
            seed,
            reference_size: Setting::Fixed(REFERENCE_SIZE),
            threads: 1,
            ..ExperimentConfig::default()
        };
        cfg.validate().map_err(js_err)?;
        let problem = cfg.problem().map_err(js_err)?;
        let m = problem.m();
        let scalarizer = cfg.scalarizer(&problem).map_err(js_err)?;
        let adapt = cfg.adapt_config(m).map_err(js_err)?;
        let weights = initial_weights(&cfg, m).map_err(js_err)?;
        let cbo = cfg.cbo_config();
        let steps = cbo.adaptation_steps();
        let runner = if oracle {
            let solver = OracleSolver {
                problem: problem.clone(),
                scalarizer,
            };
            Runner::Oracle(AdaptiveRun::new(solver, weights, adapt, steps, seed).map_err(js_err)?)
        } else {
            let solver = McboSolver::new(problem.clone(), scalarizer, cbo, weights.len(), seed)
                .map_err(js_err)?;
            Runner::Swarm(AdaptiveRun::new(solver, weights, adapt, steps, seed).map_err(js_err)?)
        };
        let reference = reference_front(&cfg, &problem).map_err(js_err)?;
        let mut demo = Demo {
            runner,
            problem,
            metric: cfg.metric_potential().map_err(js_err)?,
            reference,
        };
        demo.advance(1)?;
        Ok(demo)
    }

    /// Runs up to `count` adaptation steps; returns false once the run is over.
    pub fn advance(&mut self, count: usize) -> Result<bool, JsValue> {
        for _ in 0..count {
            let more = match &mut self.runner {
                Runner::Oracle(run) => run.advance().map_err(js_err)?.is_some(),
                Runner::Swarm(run) => run.advance().map_err(js_err)?.is_some(),
            };
            if !more {
                return Ok(false);
            }
        }
        Ok(!self.finished())
    }

    pub fn finished(&self) -> bool {
        match &self.runner {
            Runner::Oracle(run) => run.is_finished(),
            Runner::Swarm(run) => run.is_finished(),
        }
    }

    fn last(&self) -> &scalarep::StepRecord {
        let history = match &self.runner {
            Runner::Oracle(run) => run.history(),
            Runner::Swarm(run) => run.history(),
        };
        history.last().expect("constructor records k = 0")
    }

    pub fn m(&self) -> usize {
        self.problem.m()
    }

    pub fn k(&self) -> usize {
        self.last().k
    }

    /// Current images, flattened row-major (`N x m`).
    pub fn fronts(&self) -> Vec<f64> {
        self.last().fronts.concat()
    }

    /// Weights that produced `fronts`, flattened row-major.
    pub fn weights(&self) -> Vec<f64> {
        self.last()
            .weights
            .iter()
            .flat_map(|w| w.as_slice().to_vec())
            .collect()
    }

    /// Sampled front points, flattened row-major.
    pub fn reference(&self) -> Vec<f64> {
        self.reference.concat()
    }

    pub fn energy(&self) -> f64 {
        front_energy(&self.metric, &self.last().fronts).unwrap_or(f64::NAN)
    }

    pub fn igd(&self) -> f64 {
        igd(&self.reference, &self.last().fronts).unwrap_or(f64::NAN)
    }
}

/// Euclidean projection of `v` onto the probability simplex.
#[wasm_bindgen]
pub fn project_to_simplex(v: Vec<f64>) -> Result<Vec<f64>, JsValue> {
    scalarep::project_to_simplex(&v)
        .map(|w| w.into_inner())
        .map_err(js_err)
}

/// `[r_0, U(r_0), DU(r_0), r_1, ...]` on `samples` points of `(0, r_max]`.
#[wasm_bindgen]
pub fn potential_profile(
    kind: &str,
    param: f64,
    r_max: f64,
    samples: usize,
) -> Result<Vec<f64>, JsValue> {
    let pot = match kind {
        "morse" => Potential::morse(param),
        "riesz" => Potential::riesz(param),
        other => {
            return Err(js_err(format!(
                "unknown potential `{other}` (morse, riesz)"
            )))
        }
    }
    .map_err(js_err)?;
    let mut out = Vec::with_capacity(3 * samples);
    for i in 1..=samples {
        let r = r_max * i as f64 / samples as f64;
        out.extend([
            r,
            pot.radial_value(r).map_err(js_err)?,
            pot.radial_derivative(r),
        ]);
    }
    Ok(out)
}
