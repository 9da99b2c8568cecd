//! CVaR shot objective and the optimization drivers for both ansatz
//! families, plus the uniform random-sampling baseline.
//!
//! Within one optimization run every objective evaluation samples with the
//! same stream (`sim.seed`), so the objective is a deterministic function of
//! the parameters (common random numbers) and whole runs replay exactly from
//! their seeds. Parameter initialization draws from `derive_seed(seed, 1)`.
//! `iterations` counts objective evaluations.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_fpc_circuit, build_qaoa_circuit, QaoaParams, TrotterConfig};
use crate::error::{Error, Result};
use crate::histogram::ShotHistogram;
use crate::ising::{bitstring_of_index, IsingProblem, MetricsRecord, BRUTE_FORCE_QUBIT_CAP};
use crate::optimizer::{minimize, OptOutcome, OptimizerConfig};
use crate::rng::{derive_seed, rng_from_seed};
use crate::schedule::ScheduleSet;
use crate::sim::{exact_expectation, run_statevector, sample_histogram, SimConfig, SimMode};

/// Optimizer box half-width for FPC schedule control values.
pub const FPC_CONTROL_BOUND: f64 = 2.0;

/// QAOA angles are bounded by `[-pi, pi]` scaled by dt.
pub const QAOA_ANGLE_BOUND: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    Fpc,
    Qaoa,
    RandomSampling,
}

/// How parameter vectors are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitStrategy {
    /// FPC: control values uniform in [0, 1]; QAOA: angles uniform in
    /// [0, dt].
    Random,
    /// The digitized linear annealing ramp.
    LinearRamp,
}

/// What to do when the objective is queried outside the optimizer bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OobPolicy {
    Clamp,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveConfig {
    /// CVaR tail fraction in (0, 1]; 1 recovers the plain sample mean.
    pub alpha_cvar: f64,
    pub oob: OobPolicy,
}

impl Default for ObjectiveConfig {
    fn default() -> Self {
        ObjectiveConfig {
            alpha_cvar: 0.25,
            oob: OobPolicy::Clamp,
        }
    }
}

impl ObjectiveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_cvar > 0.0 && self.alpha_cvar <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha_cvar must be in (0, 1], got {}",
                self.alpha_cvar
            )));
        }
        Ok(())
    }
}

/// Conditional Value-at-Risk of the shot energies: the mean of the lowest
/// `ceil(alpha * K)` per-shot energies.
pub fn cvar_from_histogram(
    problem: &IsingProblem,
    hist: &ShotHistogram,
    alpha: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha must be in (0, 1], got {alpha}"
        )));
    }
    hist.ensure_nonempty()?;
    let mut buckets: Vec<(f64, u64)> = hist
        .iter()
        .map(|(bits, count)| Ok((problem.energy_of_bitstring(bits)?, count)))
        .collect::<Result<_>>()?;
    buckets.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tail = (alpha * hist.total_shots() as f64).ceil() as u64;
    let tail = tail.clamp(1, hist.total_shots());
    let mut remaining = tail;
    let mut acc = 0.0;
    for (energy, count) in buckets {
        let take = count.min(remaining);
        acc += energy * take as f64;
        remaining -= take;
        if remaining == 0 {
            break;
        }
    }
    Ok(acc / tail as f64)
}

/// Full optimizer trajectory and final metrics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    /// Parameter vector of every objective evaluation.
    pub params_trace: Vec<Vec<f64>>,
    /// CVaR value of every objective evaluation (exact expectation in
    /// ExactExpectation mode).
    pub value_trace: Vec<f64>,
    /// Number of objective evaluations.
    pub iterations: usize,
    pub final_params: Vec<f64>,
    /// Histogram sampled at the final parameters (absent in
    /// ExactExpectation mode).
    pub final_histogram: Option<ShotHistogram>,
    /// Lowest-energy outcome observed in the final histogram.
    pub best_energy: Option<f64>,
    /// Absent when the exact ground state is out of brute-force reach.
    pub metrics: Option<MetricsRecord>,
    /// True when the optimizer stopped on its trust-radius criterion rather
    /// than the evaluation budget.
    pub converged: bool,
    pub meta: RunMeta,
}

/// Reproducibility metadata recorded with every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub n_qubits: usize,
    pub n_layers: Option<usize>,
    pub n_p: Option<usize>,
    pub total_time: Option<f64>,
    pub epsilon: Option<f64>,
    pub shots: u64,
    pub mode: SimMode,
    pub alpha_cvar: Option<f64>,
    pub seed: u64,
    pub sampling_seed: u64,
    pub max_evals: usize,
    pub tol: f64,
    pub bounds: Option<(f64, f64)>,
    /// What "iterations" counts.
    pub iteration_unit: String,
}

fn apply_oob(x: &[f64], bounds: &[(f64, f64)], policy: OobPolicy) -> Result<Vec<f64>> {
    match policy {
        OobPolicy::Clamp => Ok(x
            .iter()
            .zip(bounds)
            .map(|(&v, &(lo, hi))| v.clamp(lo, hi))
            .collect()),
        OobPolicy::Reject => {
            for (i, (&v, &(lo, hi))) in x.iter().zip(bounds).enumerate() {
                if !(v >= lo && v <= hi) {
                    return Err(Error::InvalidInput(format!(
                        "parameter {i} = {v} outside [{lo}, {hi}]"
                    )));
                }
            }
            Ok(x.to_vec())
        }
    }
}

/// Evaluate at x0 only, producing a single-entry trajectory ("optimizer
/// disabled"). Used when `max_evals == 1`.
fn single_evaluation(
    mut objective: impl FnMut(&[f64]) -> Result<f64>,
    x0: &[f64],
) -> Result<OptOutcome> {
    let value = objective(x0)?;
    Ok(OptOutcome {
        best_params: x0.to_vec(),
        best_value: value,
        params_trace: vec![x0.to_vec()],
        value_trace: vec![value],
        evaluations: 1,
        converged: false,
    })
}

/// Metrics from the achieved final expectation; absent when the instance is
/// too large for the exact oracle.
fn metrics_for(problem: &IsingProblem, e_final: f64) -> Result<Option<MetricsRecord>> {
    if problem.n() > BRUTE_FORCE_QUBIT_CAP {
        return Ok(None);
    }
    let ground = problem.brute_force_ground()?;
    let record =
        MetricsRecord::from_energies(problem.uniform_state_energy(), e_final, ground.energy)?;
    Ok(Some(record))
}

fn best_observed_energy(problem: &IsingProblem, hist: &ShotHistogram) -> Result<f64> {
    let mut best = f64::INFINITY;
    for (bits, _) in hist.iter() {
        best = best.min(problem.energy_of_bitstring(bits)?);
    }
    Ok(best)
}

/// Shared body of the two variational drivers: compose the objective
/// (clamp, build, simulate, score), optimize, re-evaluate at the best
/// parameters, collect metrics.
#[allow(clippy::too_many_arguments)]
fn drive_run(
    problem: &IsingProblem,
    algorithm: Algorithm,
    build_state: impl Fn(&[f64]) -> Result<crate::sim::StateVector>,
    x0: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    obj: &ObjectiveConfig,
    sim: &SimConfig,
    opt: &OptimizerConfig,
    meta: RunMeta,
) -> Result<RunRecord> {
    let score = |state: &crate::sim::StateVector| match sim.mode {
        SimMode::Sampled => {
            cvar_from_histogram(problem, &sample_histogram(state, sim), obj.alpha_cvar)
        }
        SimMode::ExactExpectation => exact_expectation(state, problem),
    };
    let objective = |params: &[f64]| {
        let clamped = apply_oob(params, &bounds, obj.oob)?;
        score(&build_state(&clamped)?)
    };
    let outcome = if opt.max_evals == 1 {
        single_evaluation(objective, &x0)?
    } else {
        minimize(objective, &x0, &bounds, opt)?
    };

    let final_state = build_state(&outcome.best_params)?;
    let (final_histogram, e_final, best_energy) = match sim.mode {
        SimMode::Sampled => {
            let hist = sample_histogram(&final_state, sim);
            let e = problem.expectation_from_histogram(&hist)?;
            let best = best_observed_energy(problem, &hist)?;
            (Some(hist), e, Some(best))
        }
        SimMode::ExactExpectation => (None, exact_expectation(&final_state, problem)?, None),
    };
    let metrics = metrics_for(problem, e_final)?;

    Ok(RunRecord {
        algorithm,
        iterations: outcome.evaluations,
        params_trace: outcome.params_trace,
        value_trace: outcome.value_trace,
        final_params: outcome.best_params,
        final_histogram,
        best_energy,
        metrics,
        converged: outcome.converged,
        meta,
    })
}

/// Optimize the FPC-QAOA schedule control values (3 * n_p of them) for
/// `problem` and report the run.
#[allow(clippy::too_many_arguments)]
pub fn run_fpc(
    problem: &IsingProblem,
    n_p: usize,
    trotter: &TrotterConfig,
    sim: &SimConfig,
    obj: &ObjectiveConfig,
    opt: &OptimizerConfig,
    init: InitStrategy,
    seed: u64,
) -> Result<RunRecord> {
    trotter.validate()?;
    sim.validate()?;
    obj.validate()?;
    let dim = 3 * n_p;
    if dim == 0 {
        return Err(Error::InvalidInput(
            "n_p = 0 leaves nothing to optimize".into(),
        ));
    }
    let bounds = vec![(-FPC_CONTROL_BOUND, FPC_CONTROL_BOUND); dim];
    let x0 = match init {
        InitStrategy::Random => {
            let mut rng = rng_from_seed(derive_seed(seed, 1));
            (0..dim).map(|_| rng.random_range(0.0..=1.0)).collect()
        }
        InitStrategy::LinearRamp => ScheduleSet::linear_ramp(n_p).to_flat(),
    };

    let build_state = |params: &[f64]| {
        let set = ScheduleSet::from_flat(n_p, params)?;
        run_statevector(&build_fpc_circuit(problem, &set, trotter)?)
    };

    let meta = RunMeta {
        n_qubits: problem.n(),
        n_layers: Some(trotter.n_layers),
        n_p: Some(n_p),
        total_time: Some(trotter.total_time),
        epsilon: Some(trotter.epsilon),
        shots: sim.shots,
        mode: sim.mode,
        alpha_cvar: Some(obj.alpha_cvar),
        seed,
        sampling_seed: sim.seed,
        max_evals: opt.max_evals,
        tol: opt.tol,
        bounds: Some((-FPC_CONTROL_BOUND, FPC_CONTROL_BOUND)),
        iteration_unit: "objective-evaluations".into(),
    };
    drive_run(
        problem,
        Algorithm::Fpc,
        build_state,
        x0,
        bounds,
        obj,
        sim,
        opt,
        meta,
    )
}

/// Optimize the `2N` standard-QAOA angles for `problem` and report the run.
#[allow(clippy::too_many_arguments)]
pub fn run_qaoa(
    problem: &IsingProblem,
    trotter: &TrotterConfig,
    sim: &SimConfig,
    obj: &ObjectiveConfig,
    opt: &OptimizerConfig,
    init: InitStrategy,
    seed: u64,
) -> Result<RunRecord> {
    trotter.validate()?;
    sim.validate()?;
    obj.validate()?;
    let n_layers = trotter.n_layers;
    let dim = 2 * n_layers;
    let dt = trotter.dt();
    let bound = QAOA_ANGLE_BOUND * dt;
    let bounds = vec![(-bound, bound); dim];
    let x0 = match init {
        InitStrategy::Random => {
            let mut rng = rng_from_seed(derive_seed(seed, 1));
            (0..dim).map(|_| rng.random_range(0.0..=dt)).collect()
        }
        InitStrategy::LinearRamp => QaoaParams::linear_ramp(trotter)?.to_flat(),
    };

    let build_state = |params: &[f64]| {
        let qp = QaoaParams::from_flat(n_layers, params)?;
        run_statevector(&build_qaoa_circuit(problem, &qp, trotter.epsilon)?)
    };

    let meta = RunMeta {
        n_qubits: problem.n(),
        n_layers: Some(n_layers),
        n_p: None,
        total_time: Some(trotter.total_time),
        epsilon: Some(trotter.epsilon),
        shots: sim.shots,
        mode: sim.mode,
        alpha_cvar: Some(obj.alpha_cvar),
        seed,
        sampling_seed: sim.seed,
        max_evals: opt.max_evals,
        tol: opt.tol,
        bounds: Some((-bound, bound)),
        iteration_unit: "objective-evaluations".into(),
    };
    drive_run(
        problem,
        Algorithm::Qaoa,
        build_state,
        x0,
        bounds,
        obj,
        sim,
        opt,
        meta,
    )
}

/// Uniform random-sampling baseline: draw `sim.shots` bitstrings uniformly,
/// report the histogram, its mean energy, and the best observed energy.
pub fn run_random_sampling(
    problem: &IsingProblem,
    sim: &SimConfig,
    seed: u64,
) -> Result<RunRecord> {
    let n = problem.n();
    if n == 0 || n > 63 {
        return Err(Error::InvalidInput(format!(
            "random sampling supports 1..=63 qubits, got {n}"
        )));
    }
    if sim.shots == 0 {
        return Err(Error::InvalidInput("need at least one shot".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut hist = ShotHistogram::new();
    for _ in 0..sim.shots {
        let index = rng.random_range(0..(1u64 << n));
        hist.record(&bitstring_of_index(index, n));
    }
    let mean = problem.expectation_from_histogram(&hist)?;
    let best = best_observed_energy(problem, &hist)?;
    let metrics = if n <= BRUTE_FORCE_QUBIT_CAP {
        let ground = problem.brute_force_ground()?;
        MetricsRecord::from_energies(problem.uniform_state_energy(), mean, ground.energy).ok()
    } else {
        None
    };

    Ok(RunRecord {
        algorithm: Algorithm::RandomSampling,
        params_trace: vec![vec![]],
        value_trace: vec![mean],
        iterations: 1,
        final_params: vec![],
        final_histogram: Some(hist),
        best_energy: Some(best),
        metrics,
        converged: true,
        meta: RunMeta {
            n_qubits: n,
            n_layers: None,
            n_p: None,
            total_time: None,
            epsilon: None,
            shots: sim.shots,
            mode: SimMode::Sampled,
            alpha_cvar: None,
            seed,
            sampling_seed: seed,
            max_evals: 1,
            tol: 0.0,
            bounds: None,
            iteration_unit: "objective-evaluations".into(),
        },
    })
}
