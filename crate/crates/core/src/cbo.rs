//! Auxiliary solvers for the scalarized sub-problems and the adaptive driver
//! that couples them with the weight dynamics.
//!
//! [`McboSolver`] runs one consensus-based swarm of `n` agents per
//! sub-problem on `[0,1]^d`. [`OracleSolver`] returns the exact Chebyshev
//! minimizer on a problem's analytic front and is used to study the dynamics
//! without solver noise. [`AdaptiveRun`] alternates solving and adapting for
//! either of them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::adapt::{adapt_step, AdaptConfig};
use crate::error::{Error, Result};
use crate::problems::{FrontOracle, Problem};
use crate::scalarize::Scalarizer;
use crate::simplex::{Weight, WeightEnsemble};

const ADAPT_STREAM: u64 = 0;

/// Independent ChaCha stream `id` under the run seed. Sub-problem `i` draws
/// from stream `i + 1`, so results do not depend on the thread count.
pub fn seeded_stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CboConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub sigma: f64,
    pub dt: f64,
    /// Agents per sub-problem.
    pub agents: usize,
    /// CBO iterations between two weight adaptations.
    pub t_k: usize,
    pub s_max: usize,
    /// Consensus of sub-problem `i` over the agents of every sub-problem
    /// (instead of its own `n` agents).
    pub shared_consensus: bool,
}

impl Default for CboConfig {
    fn default() -> Self {
        CboConfig {
            alpha: 1e5,
            lambda: 1.0,
            sigma: 1.0,
            dt: 1e-2,
            agents: 20,
            t_k: 50,
            s_max: 200 * 50,
            shared_consensus: false,
        }
    }
}

impl CboConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(name, format!("must be > 0, got {v}")))
            }
        };
        positive("alpha", self.alpha)?;
        positive("lambda", self.lambda)?;
        positive("dt", self.dt)?;
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::config(
                "sigma",
                format!("must be >= 0, got {}", self.sigma),
            ));
        }
        if self.agents == 0 {
            return Err(Error::config("agents", "must be >= 1"));
        }
        if self.t_k == 0 {
            return Err(Error::config("t_k", "must be >= 1"));
        }
        if self.s_max == 0 || !self.s_max.is_multiple_of(self.t_k) {
            return Err(Error::config(
                "s_max",
                format!(
                    "must be a positive multiple of t_k={}, got {}",
                    self.t_k, self.s_max
                ),
            ));
        }
        Ok(())
    }

    /// Number of weight adaptations in a full run.
    pub fn adaptation_steps(&self) -> usize {
        self.s_max / self.t_k
    }
}

/// The `n` agents of one sub-problem and their private random stream.
#[derive(Clone, Debug)]
pub struct SubSwarm {
    /// Row-major `n x d`.
    pub positions: Vec<f64>,
    values: Vec<f64>,
    rng: ChaCha8Rng,
}

#[derive(Clone, Debug)]
pub struct Swarm {
    pub d: usize,
    pub n: usize,
    pub subs: Vec<SubSwarm>,
    /// CBO iteration counter.
    pub s: usize,
}

impl Swarm {
    /// `subproblems * agents` i.i.d. uniform points of `[0,1]^d`.
    pub fn init(d: usize, subproblems: usize, agents: usize, seed: u64) -> Result<Self> {
        if d == 0 || subproblems == 0 || agents == 0 {
            return Err(Error::invalid("swarm needs d, N, n >= 1"));
        }
        let subs = (0..subproblems)
            .map(|i| {
                let mut rng = seeded_stream(seed, i as u64 + 1);
                let positions = (0..agents * d).map(|_| rng.random::<f64>()).collect();
                SubSwarm {
                    positions,
                    values: Vec::new(),
                    rng,
                }
            })
            .collect();
        Ok(Swarm {
            d,
            n: agents,
            subs,
            s: 0,
        })
    }

    pub fn agents_in_box(&self) -> bool {
        self.subs
            .iter()
            .flat_map(|s| &s.positions)
            .all(|x| (0.0..=1.0).contains(x))
    }

    /// One CBO move of every agent towards its sub-problem's consensus point.
    pub fn step(&mut self, consensus: &[Vec<f64>], cfg: &CboConfig) {
        assert_eq!(consensus.len(), self.subs.len());
        let d = self.d;
        for_each_sub(&mut self.subs, |i, sub| {
            cbo_step_agents(&mut sub.positions, d, &consensus[i], cfg, &mut sub.rng);
        });
        self.s += 1;
    }
}

#[cfg(feature = "parallel")]
fn for_each_sub(subs: &mut [SubSwarm], f: impl Fn(usize, &mut SubSwarm) + Sync + Send) {
    subs.par_iter_mut().enumerate().for_each(|(i, s)| f(i, s));
}

#[cfg(not(feature = "parallel"))]
fn for_each_sub(subs: &mut [SubSwarm], f: impl Fn(usize, &mut SubSwarm)) {
    subs.iter_mut().enumerate().for_each(|(i, s)| f(i, s));
}

#[cfg(feature = "parallel")]
fn map_indices<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indices<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Gibbs-weighted mean of `positions` (row-major, width `d`) with weights
/// `exp(-alpha * values)`, shifted by the minimum value before exponentiating.
pub fn consensus_point(positions: &[f64], d: usize, values: &[f64], alpha: f64) -> Vec<f64> {
    debug_assert_eq!(positions.len(), values.len() * d);
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let mut out = vec![0.0; d];
    let mut total = 0.0;
    for (x, v) in positions.chunks_exact(d).zip(values) {
        let g = (-alpha * (v - best)).exp();
        total += g;
        for (o, xj) in out.iter_mut().zip(x) {
            *o += g * xj;
        }
    }
    out.iter_mut().for_each(|o| *o /= total);
    out
}

/// Drift `lambda*dt*(Y - X)`, noise `sigma*sqrt(dt)*|Y - X|*Z`, then clamp to the box.
///
/// `d` normal draws are taken per agent even when the noise amplitude is zero.
pub fn cbo_step_agents<R: Rng + ?Sized>(
    positions: &mut [f64],
    d: usize,
    consensus: &[f64],
    cfg: &CboConfig,
    rng: &mut R,
) {
    let drift = cfg.lambda * cfg.dt;
    let diffusion = cfg.sigma * cfg.dt.sqrt();
    let mut diff = vec![0.0; d];
    for x in positions.chunks_exact_mut(d) {
        for ((df, y), xj) in diff.iter_mut().zip(consensus).zip(x.iter()) {
            *df = y - xj;
        }
        let dist = diff.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (xj, df) in x.iter_mut().zip(diff.iter()) {
            let z: f64 = rng.sample(StandardNormal);
            *xj = (*xj + drift * df + diffusion * dist * z).clamp(0.0, 1.0);
        }
    }
}

/// Approximate minimizers `xi(W_i)` and their images `F_i = f(xi(W_i))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub decisions: Vec<Vec<f64>>,
    pub images: Vec<Vec<f64>>,
}

/// Anything that can solve every scalarized sub-problem for a set of weights.
pub trait AuxiliarySolver {
    fn solve(&mut self, weights: &[Weight]) -> Result<Solution>;
}

/// Exact Chebyshev minimizer on the analytic front.
pub fn oracle_solve<P: FrontOracle + ?Sized>(
    problem: &P,
    w: &Weight,
    scalarizer: &Scalarizer,
) -> Result<Vec<f64>> {
    if !scalarizer.is_chebyshev() {
        return Err(Error::invalid("the oracle solver only supports p = inf"));
    }
    problem.chebyshev_minimizer(w, scalarizer.ideal())
}

#[derive(Clone, Debug)]
pub struct OracleSolver<P> {
    pub problem: P,
    pub scalarizer: Scalarizer,
}

impl<P: Problem + FrontOracle> AuxiliarySolver for OracleSolver<P> {
    fn solve(&mut self, weights: &[Weight]) -> Result<Solution> {
        let images = weights
            .iter()
            .map(|w| oracle_solve(&self.problem, w, &self.scalarizer))
            .collect::<Result<Vec<_>>>()?;
        let decisions = images.iter().map(|y| self.problem.preimage(y)).collect();
        Ok(Solution { decisions, images })
    }
}

/// Multi-swarm consensus-based solver.
///
/// The first `solve` only evaluates the initial swarm; every later call first
/// applies the move that was pending from the previous consensus and then runs
/// `t_k - 1` further CBO iterations under the new weights.
#[derive(Clone, Debug)]
pub struct McboSolver<P> {
    pub problem: P,
    pub scalarizer: Scalarizer,
    pub cfg: CboConfig,
    pub swarm: Swarm,
    pending: Option<Vec<Vec<f64>>>,
}

impl<P: Problem> McboSolver<P> {
    pub fn new(
        problem: P,
        scalarizer: Scalarizer,
        cfg: CboConfig,
        subproblems: usize,
        seed: u64,
    ) -> Result<Self> {
        cfg.validate()?;
        let swarm = Swarm::init(problem.d(), subproblems, cfg.agents, seed)?;
        Ok(McboSolver {
            problem,
            scalarizer,
            cfg,
            swarm,
            pending: None,
        })
    }

    fn evaluate(&mut self, weights: &[Weight]) -> Result<()> {
        let d = self.swarm.d;
        let m = self.problem.m();
        let step = self.swarm.s;
        let problem = &self.problem;
        let scalarizer = &self.scalarizer;
        let shared = self.cfg.shared_consensus;
        for_each_sub(&mut self.swarm.subs, |i, sub| {
            let mut f = vec![0.0; m];
            sub.values.clear();
            for x in sub.positions.chunks_exact(d) {
                problem.evaluate_into(x, &mut f);
                if shared {
                    sub.values.extend_from_slice(&f);
                } else {
                    sub.values
                        .push(scalarizer.scalarize_unchecked(&f, weights[i].as_slice()));
                }
            }
        });
        for (i, sub) in self.swarm.subs.iter().enumerate() {
            if sub.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    step,
                    subproblem: i,
                    detail: "objective evaluation returned a non-finite value".into(),
                });
            }
        }
        Ok(())
    }

    /// Consensus points for the current swarm state under `weights`.
    pub fn consensus(&mut self, weights: &[Weight]) -> Result<Vec<Vec<f64>>> {
        if weights.len() != self.swarm.subs.len() {
            return Err(Error::invalid(format!(
                "{} weights for {} sub-swarms",
                weights.len(),
                self.swarm.subs.len()
            )));
        }
        self.evaluate(weights)?;
        let d = self.swarm.d;
        let m = self.problem.m();
        let alpha = self.cfg.alpha;
        let subs = &self.swarm.subs;
        let scalarizer = &self.scalarizer;
        if !self.cfg.shared_consensus {
            return Ok(map_indices(subs.len(), |i| {
                consensus_point(&subs[i].positions, d, &subs[i].values, alpha)
            }));
        }
        let all_positions: Vec<f64> = subs
            .iter()
            .flat_map(|s| s.positions.iter().copied())
            .collect();
        let all_images: Vec<f64> = subs.iter().flat_map(|s| s.values.iter().copied()).collect();
        Ok(map_indices(subs.len(), |i| {
            let values: Vec<f64> = all_images
                .chunks_exact(m)
                .map(|f| scalarizer.scalarize_unchecked(f, weights[i].as_slice()))
                .collect();
            consensus_point(&all_positions, d, &values, alpha)
        }))
    }
}

impl<P: Problem> AuxiliarySolver for McboSolver<P> {
    fn solve(&mut self, weights: &[Weight]) -> Result<Solution> {
        if let Some(prev) = self.pending.take() {
            self.swarm.step(&prev, &self.cfg);
            for _ in 1..self.cfg.t_k {
                let y = self.consensus(weights)?;
                self.swarm.step(&y, &self.cfg);
            }
        }
        let decisions = self.consensus(weights)?;
        let mut images = Vec::with_capacity(decisions.len());
        for (i, y) in decisions.iter().enumerate() {
            let f = self.problem.evaluate(y);
            if f.iter().any(|v| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    step: self.swarm.s,
                    subproblem: i,
                    detail: format!("consensus {y:?} has image {f:?}"),
                });
            }
            images.push(f);
        }
        self.pending = Some(decisions.clone());
        Ok(Solution { decisions, images })
    }
}

/// Weights and images at one adaptation step `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub weights: Vec<Weight>,
    pub fronts: Vec<Vec<f64>>,
}

/// Alternates `solver` and the weight dynamics for `steps` adaptations,
/// recording `(W_k, F_k)` for `k = 0..=steps`.
#[derive(Clone, Debug)]
pub struct AdaptiveRun<S> {
    pub solver: S,
    pub adapt: AdaptConfig,
    weights: WeightEnsemble,
    rng: ChaCha8Rng,
    steps: usize,
    history: Vec<StepRecord>,
    decisions: Vec<Vec<f64>>,
}

impl<S: AuxiliarySolver> AdaptiveRun<S> {
    pub fn new(
        solver: S,
        weights: WeightEnsemble,
        adapt: AdaptConfig,
        steps: usize,
        seed: u64,
    ) -> Result<Self> {
        adapt.validate(weights.dim())?;
        Ok(AdaptiveRun {
            solver,
            adapt,
            weights,
            rng: seeded_stream(seed, ADAPT_STREAM),
            steps,
            history: Vec::with_capacity(steps + 1),
            decisions: Vec::new(),
        })
    }

    pub fn is_finished(&self) -> bool {
        self.history.len() > self.steps
    }

    /// Solves under the current weights, records the step, and adapts the
    /// weights unless this was the last step. `None` once finished.
    pub fn advance(&mut self) -> Result<Option<&StepRecord>> {
        if self.is_finished() {
            return Ok(None);
        }
        let sol = self.solver.solve(&self.weights.weights)?;
        let record = StepRecord {
            k: self.weights.k,
            weights: self.weights.weights.clone(),
            fronts: sol.images,
        };
        if record.k < self.steps {
            self.weights = adapt_step(&self.weights, &record.fronts, &self.adapt, &mut self.rng)?;
        }
        self.decisions = sol.decisions;
        self.history.push(record);
        Ok(self.history.last())
    }

    pub fn run_to_end(&mut self) -> Result<()> {
        while self.advance()?.is_some() {}
        Ok(())
    }

    pub fn history(&self) -> &[StepRecord] {
        &self.history
    }

    pub fn weights(&self) -> &WeightEnsemble {
        &self.weights
    }

    /// Latest `xi(W_i)`.
    pub fn decisions(&self) -> &[Vec<f64>] {
        &self.decisions
    }

    pub fn into_trajectory(self) -> Trajectory {
        Trajectory {
            k: self.weights.k,
            history: self.history,
            decisions: self.decisions,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    /// Final adaptation counter.
    pub k: usize,
    pub history: Vec<StepRecord>,
    pub decisions: Vec<Vec<f64>>,
}

/// The full coupled algorithm: M-CBO with the configured adaptation every `t_k` iterations.
pub fn solve_mcbo<P: Problem>(
    problem: P,
    weights: WeightEnsemble,
    scalarizer: Scalarizer,
    cfg: &CboConfig,
    adapt: &AdaptConfig,
    seed: u64,
) -> Result<(Trajectory, Swarm)> {
    let steps = cfg.adaptation_steps();
    let solver = McboSolver::new(problem, scalarizer, cfg.clone(), weights.len(), seed)?;
    let mut run = AdaptiveRun::new(solver, weights, adapt.clone(), steps, seed)?;
    run.run_to_end()?;
    let swarm = run.solver.swarm.clone();
    Ok((run.into_trajectory(), swarm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapt::Dynamics;
    use crate::problems::BuiltinProblem;
    use crate::simplex::das_dennis_lattice;

    #[test]
    fn init_is_uniform_and_deterministic() {
        let a = Swarm::init(2, 10, 1000, 42).unwrap();
        let b = Swarm::init(2, 10, 1000, 42).unwrap();
        assert!(a.agents_in_box());
        for (sa, sb) in a.subs.iter().zip(&b.subs) {
            assert_eq!(sa.positions, sb.positions);
        }
        let all: Vec<f64> = a
            .subs
            .iter()
            .flat_map(|s| s.positions.iter().copied())
            .collect();
        for j in 0..2 {
            let mean = all.iter().skip(j).step_by(2).sum::<f64>() / 10_000.0;
            assert!((mean - 0.5).abs() <= 0.02, "{mean}");
        }
        assert_ne!(
            Swarm::init(2, 1, 5, 43).unwrap().subs[0].positions,
            a.subs[0].positions[..10]
        );
    }

    #[test]
    fn consensus_examples() {
        assert_eq!(consensus_point(&[0.3, 0.7], 2, &[5.0], 1e5), vec![0.3, 0.7]);
        let pos = [0.0, 0.0, 1.0, 0.0, 0.5, 1.0];
        let y = consensus_point(&pos, 2, &[2.0, 2.0, 2.0], 1e5);
        assert!((y[0] - 0.5).abs() < 1e-15 && (y[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn consensus_approaches_best_agent() {
        let pos = [0.1, 0.2, 0.9, 0.4, 0.5, 0.5, 0.3, 0.8];
        let values: [f64; 4] = [0.502, 0.5, 0.501, 0.7];
        let best = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(h, _)| h)
            .unwrap();
        let y = consensus_point(&pos, 2, &values, 1e5);
        assert!((y[0] - pos[2 * best]).abs() <= 1e-8);
        assert!((y[1] - pos[2 * best + 1]).abs() <= 1e-8);
    }

    #[test]
    fn consensus_is_shift_invariant() {
        let pos = [0.1, 0.2, 0.9, 0.4, 0.5, 0.5];
        let values = [0.31, 0.30, 0.3001];
        let shifted: Vec<f64> = values.iter().map(|v| v + 17.0).collect();
        let a = consensus_point(&pos, 2, &values, 1e4);
        let b = consensus_point(&pos, 2, &shifted, 1e4);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn step_examples() {
        let cfg = CboConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut x = vec![0.4, 0.6];
        cbo_step_agents(&mut x, 2, &[0.4, 0.6], &cfg, &mut rng);
        assert_eq!(x, vec![0.4, 0.6]);

        let det = CboConfig {
            sigma: 0.0,
            ..CboConfig::default()
        };
        let mut x = vec![0.0, 0.0];
        cbo_step_agents(&mut x, 2, &[1.0, 1.0], &det, &mut rng);
        assert!((x[0] - 0.01).abs() < 1e-15 && (x[1] - 0.01).abs() < 1e-15);

        let jump = CboConfig {
            sigma: 0.0,
            dt: 1.0,
            ..CboConfig::default()
        };
        let mut x = vec![0.5, 0.5];
        cbo_step_agents(&mut x, 2, &[-0.5, 0.5], &jump, &mut rng);
        assert_eq!(x, vec![0.0, 0.5]);
    }

    #[test]
    fn deterministic_contraction() {
        let cfg = CboConfig {
            sigma: 0.0,
            ..CboConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let y = [0.3, 0.6, 0.2];
        let mut x = vec![0.9, 0.1, 0.7];
        let d0 = ((0.6f64).powi(2) + 0.5f64.powi(2) + 0.5f64.powi(2)).sqrt();
        for s in 1..=100 {
            cbo_step_agents(&mut x, 3, &y, &cfg, &mut rng);
            let dist = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!((dist - 0.99f64.powi(s) * d0).abs() <= 1e-12);
        }
    }

    #[test]
    fn agents_stay_in_box() {
        let cfg = CboConfig {
            sigma: 5.0,
            ..CboConfig::default()
        };
        let mut swarm = Swarm::init(3, 4, 10, 1).unwrap();
        let far = vec![vec![2.0, -1.0, 0.5]; 4];
        for _ in 0..200 {
            swarm.step(&far, &cfg);
            assert!(swarm.agents_in_box());
        }
        assert_eq!(swarm.s, 200);
    }

    #[test]
    fn config_validation() {
        assert!(CboConfig::default().validate().is_ok());
        assert!(CboConfig {
            s_max: 120,
            ..CboConfig::default()
        }
        .validate()
        .is_err());
        assert!(CboConfig {
            alpha: 0.0,
            ..CboConfig::default()
        }
        .validate()
        .is_err());
        assert!(CboConfig {
            agents: 0,
            ..CboConfig::default()
        }
        .validate()
        .is_err());
        assert_eq!(CboConfig::default().adaptation_steps(), 200);
    }

    #[test]
    fn oracle_requires_chebyshev() {
        let p = BuiltinProblem::lame(2, 2.0).unwrap();
        let s = Scalarizer::new(2.0, vec![0.0, 0.0]).unwrap();
        assert!(oracle_solve(&p, &Weight::uniform(2), &s).is_err());
    }

    #[test]
    fn short_mcbo_run_is_reproducible() {
        let p = BuiltinProblem::lame(2, 0.25).unwrap();
        let w = WeightEnsemble::new(das_dennis_lattice(2, 4).unwrap()).unwrap();
        let s = Scalarizer::chebyshev(vec![0.0, 0.0]).unwrap();
        let cfg = CboConfig {
            s_max: 200,
            ..CboConfig::default()
        };
        let adapt = AdaptConfig::with_defaults(Dynamics::PairwiseNoise, 2);
        let (a, swarm) = solve_mcbo(p.clone(), w.clone(), s.clone(), &cfg, &adapt, 9).unwrap();
        let (b, _) = solve_mcbo(p, w, s, &cfg, &adapt, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.k, 4);
        assert_eq!(a.history.len(), 5);
        assert_eq!(swarm.s, 200);
        assert!(swarm.agents_in_box());
    }

    #[test]
    fn shared_consensus_runs() {
        let p = BuiltinProblem::lame(2, 2.0).unwrap();
        let w = WeightEnsemble::new(das_dennis_lattice(2, 3).unwrap()).unwrap();
        let s = Scalarizer::chebyshev(vec![0.0, 0.0]).unwrap();
        let cfg = CboConfig {
            s_max: 100,
            shared_consensus: true,
            ..CboConfig::default()
        };
        let adapt = AdaptConfig::with_defaults(Dynamics::Fixed, 2);
        let (t, _) = solve_mcbo(p, w, s, &cfg, &adapt, 1).unwrap();
        assert_eq!(t.history.len(), 3);
    }

    #[test]
    fn oracle_run_records_every_step() {
        let p = BuiltinProblem::lame(2, 2.0).unwrap();
        let s = Scalarizer::chebyshev(vec![0.0, 0.0]).unwrap();
        let w = WeightEnsemble::new(das_dennis_lattice(2, 14).unwrap()).unwrap();
        let solver = OracleSolver {
            problem: p.clone(),
            scalarizer: s,
        };
        let mut run = AdaptiveRun::new(
            solver,
            w,
            AdaptConfig::with_defaults(Dynamics::Pairwise, 2),
            10,
            0,
        )
        .unwrap();
        run.run_to_end().unwrap();
        assert_eq!(run.history().len(), 11);
        assert_eq!(run.weights().k, 10);
        assert!(run.advance().unwrap().is_none());
        for rec in run.history() {
            assert!(rec.fronts.iter().all(|f| p.front_residual(f) <= 1e-9));
        }
    }
}
