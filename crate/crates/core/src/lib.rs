//! Adaptive weight selection for scalarized multi-objective optimization.
//!
//! A set of weight vectors on the probability simplex is moved by
//! interaction dynamics so that the images of the scalarized sub-problems
//! spread evenly along the Pareto front. Sub-problems are solved by a
//! consensus-based particle swarm (or, for testing, by an exact oracle).

pub mod adapt;
pub mod cbo;
pub mod config;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod output;
pub mod plot;
pub mod potential;
pub mod problems;
pub mod scalarize;
pub mod simplex;

pub use adapt::{AdaptConfig, Dynamics};
pub use cbo::{AdaptiveRun, AuxiliarySolver, CboConfig, McboSolver, OracleSolver, StepRecord};
pub use config::ExperimentConfig;
pub use error::{Error, Result};
pub use harness::{run_experiment, run_single, RunRecord};
pub use potential::Potential;
pub use problems::{BuiltinProblem, FrontOracle, Problem};
pub use scalarize::Scalarizer;
pub use simplex::{project_to_simplex, Weight, WeightEnsemble};
