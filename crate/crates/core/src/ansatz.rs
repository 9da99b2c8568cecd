//! Circuit construction for standard QAOA and FPC-QAOA.
//!
//! Both ansatz families prepare |+...+> and then alternate problem and mixer
//! blocks. FPC-QAOA samples its three schedule functions at the layer
//! midpoints `tau_j / T = (j + 0.5) * dt / T` and inserts an auxiliary block
//! of local RZ rotations between problem and mixer; standard QAOA takes one
//! `(alpha_j, beta_j)` angle pair per layer. Within a layer the emit order is
//! problem, auxiliary, mixer, and within the problem block gates follow the
//! problem's canonical term order.
//!
//! Angle conventions (with `RZ(t) = exp(-i t Z/2)` etc.): a problem term with
//! weight `w` evolved for `F2 * dt` becomes `RZ/RZZ(2 w (F2 dt))`, the mixer
//! `H_i = -eps * sum X` becomes `RX(-2 eps (F1 dt))`. FPC-QAOA with a
//! vanishing bias schedule is therefore gate-for-gate the standard QAOA with
//! `alpha_j = F1(tau_j / T) dt`, `beta_j = F2(tau_j / T) dt`.

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::ising::IsingProblem;
use crate::schedule::{ScheduleKind, ScheduleSet};

/// Trotterization parameters for FPC-QAOA.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrotterConfig {
    /// Number of Trotter layers N.
    pub n_layers: usize,
    /// Total evolution time T (dimensionless, hbar = 1).
    pub total_time: f64,
    /// Mixer strength: `H_i = -epsilon * sum_j X_j`.
    pub epsilon: f64,
}

impl TrotterConfig {
    /// Defaults: `T = N/2` (so `dt = 1/2`) and `epsilon = 1`. The half-unit
    /// step keeps per-layer rotation angles in the regime where the best
    /// schedule shapes are monotone, which is where the control-point
    /// initialization starts.
    pub fn new(n_layers: usize) -> Self {
        TrotterConfig {
            n_layers,
            total_time: 0.5 * n_layers as f64,
            epsilon: 1.0,
        }
    }

    pub fn with_total_time(mut self, total_time: f64) -> Self {
        self.total_time = total_time;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_layers as f64
    }

    /// Normalized midpoint sample `tau_j / T` of layer `j`; strictly inside
    /// (0, 1) for every valid config.
    pub fn midpoint(&self, layer: usize) -> f64 {
        (layer as f64 + 0.5) * self.dt() / self.total_time
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_layers == 0 {
            return Err(Error::InvalidInput(
                "need at least one Trotter layer".into(),
            ));
        }
        if !(self.total_time > 0.0) {
            return Err(Error::InvalidInput(format!(
                "total_time must be > 0, got {}",
                self.total_time
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidInput(format!(
                "epsilon must be > 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// The `2N` trainable angles of standard QAOA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if alphas.len() != betas.len() {
            return Err(Error::InvalidInput(format!(
                "alpha/beta length mismatch: {} vs {}",
                alphas.len(),
                betas.len()
            )));
        }
        if alphas.is_empty() {
            return Err(Error::InvalidInput("QAOA needs at least one layer".into()));
        }
        Ok(QaoaParams { alphas, betas })
    }

    /// Split one flat trainable vector `[alphas.., betas..]` of length `2N`.
    pub fn from_flat(n_layers: usize, flat: &[f64]) -> Result<Self> {
        if flat.len() != 2 * n_layers {
            return Err(Error::InvalidInput(format!(
                "expected {} trainable values, got {}",
                2 * n_layers,
                flat.len()
            )));
        }
        Self::new(flat[..n_layers].to_vec(), flat[n_layers..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.alphas.len());
        out.extend_from_slice(&self.alphas);
        out.extend_from_slice(&self.betas);
        out
    }

    /// Digitized linear-ramp initialization:
    /// `alpha_j = (1 - s_j) dt`, `beta_j = s_j dt` at the layer midpoints.
    pub fn linear_ramp(cfg: &TrotterConfig) -> Result<Self> {
        cfg.validate()?;
        let dt = cfg.dt();
        let mut alphas = Vec::with_capacity(cfg.n_layers);
        let mut betas = Vec::with_capacity(cfg.n_layers);
        for j in 0..cfg.n_layers {
            let s = cfg.midpoint(j);
            alphas.push((1.0 - s) * dt);
            betas.push(s * dt);
        }
        Self::new(alphas, betas)
    }

    pub fn n_layers(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

/// Which ansatz family, for parameter accounting and run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnsatzKind {
    Fpc,
    Qaoa,
}

/// Trainable parameter count: FPC-QAOA carries `3 * n_p` values independent
/// of depth, standard QAOA `2 * N`.
pub fn count_trainable(kind: AnsatzKind, size: usize) -> usize {
    match kind {
        AnsatzKind::Fpc => 3 * size,
        AnsatzKind::Qaoa => 2 * size,
    }
}

/// Emit one problem block: RZ for every linear term, then RZZ for every
/// quadratic term, in canonical order, all scaled by `weight_dt`
/// (= schedule value times dt, or a bare QAOA angle).
fn push_problem_block(circuit: &mut Circuit, problem: &IsingProblem, weight_dt: f64) -> Result<()> {
    for (q, w) in problem.linear_terms() {
        circuit.rz(q, 2.0 * w * weight_dt)?;
    }
    for (q1, q2, g) in problem.quadratic_terms() {
        circuit.rzz(q1, q2, 2.0 * g * weight_dt)?;
    }
    Ok(())
}

fn push_mixer_block(circuit: &mut Circuit, n: usize, epsilon: f64, weight_dt: f64) -> Result<()> {
    for q in 0..n {
        circuit.rx(q, -2.0 * epsilon * weight_dt)?;
    }
    Ok(())
}

/// Build the FPC-QAOA circuit: Hadamard prologue, then per layer the problem
/// block (scaled by F2), the auxiliary bias block (local RZ on every
/// nonzero-field qubit, scaled by F3), and the mixer block (scaled by F1).
pub fn build_fpc_circuit(
    problem: &IsingProblem,
    schedules: &ScheduleSet,
    cfg: &TrotterConfig,
) -> Result<Circuit> {
    cfg.validate()?;
    if problem.n() == 0 {
        return Err(Error::InvalidInput("problem has no qubits".into()));
    }
    let n = problem.n();
    let dt = cfg.dt();
    let fns = schedules.build();
    let mut circuit = Circuit::new(n);
    for q in 0..n {
        circuit.h(q)?;
    }
    for layer in 0..cfg.n_layers {
        let s = cfg.midpoint(layer);
        let f1 = fns.eval(ScheduleKind::Mixer, s)?;
        let f2 = fns.eval(ScheduleKind::Problem, s)?;
        let f3 = fns.eval(ScheduleKind::Bias, s)?;
        push_problem_block(&mut circuit, problem, f2 * dt)?;
        // Auxiliary block: the local component of the problem Hamiltonian,
        // driven by its own schedule.
        let f3_dt = f3 * dt;
        for (q, w) in problem.linear_terms() {
            circuit.rz(q, 2.0 * w * f3_dt)?;
        }
        push_mixer_block(&mut circuit, n, cfg.epsilon, f1 * dt)?;
    }
    Ok(circuit)
}

/// Build the standard QAOA circuit: Hadamard prologue, then per layer the
/// problem block scaled by `beta_j` and the mixer block scaled by `alpha_j`.
pub fn build_qaoa_circuit(
    problem: &IsingProblem,
    params: &QaoaParams,
    epsilon: f64,
) -> Result<Circuit> {
    if problem.n() == 0 {
        return Err(Error::InvalidInput("problem has no qubits".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    let n = problem.n();
    let mut circuit = Circuit::new(n);
    for q in 0..n {
        circuit.h(q)?;
    }
    for layer in 0..params.n_layers() {
        push_problem_block(&mut circuit, problem, params.betas[layer])?;
        push_mixer_block(&mut circuit, n, epsilon, params.alphas[layer])?;
    }
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    fn single_edge(weight: f64) -> IsingProblem {
        let mut p = IsingProblem::new(2);
        p.add_quadratic(0, 1, weight).unwrap();
        p
    }

    #[test]
    fn midpoints_for_three_layers() {
        let cfg = TrotterConfig::new(3).with_total_time(3.0);
        let want = [1.0 / 6.0, 0.5, 5.0 / 6.0];
        for (j, w) in want.iter().enumerate() {
            assert!((cfg.midpoint(j) - w).abs() < 1e-15);
            assert!(cfg.midpoint(j) > 0.0 && cfg.midpoint(j) < 1.0);
        }
    }

    #[test]
    fn fpc_angles_from_schedule_samples() {
        // N = 1, T = 1: the single midpoint is s = 0.5, where the schedules
        // take exactly their control values.
        let p = single_edge(1.0);
        let set = ScheduleSet::from_flat(1, &[1.0, 0.5, 0.0]).unwrap();
        let cfg = TrotterConfig::new(1).with_total_time(1.0);
        let c = build_fpc_circuit(&p, &set, &cfg).unwrap();
        let rzz: Vec<&Gate> = c
            .ops()
            .iter()
            .filter(|g| matches!(g, Gate::Rzz { .. }))
            .collect();
        assert_eq!(rzz.len(), 1);
        assert!(matches!(rzz[0], Gate::Rzz { theta, .. } if (theta - 1.0).abs() < 1e-15));
        let rx: Vec<&Gate> = c
            .ops()
            .iter()
            .filter(|g| matches!(g, Gate::Rx { .. }))
            .collect();
        assert_eq!(rx.len(), 2);
        assert!(matches!(rx[0], Gate::Rx { theta, .. } if (theta + 2.0).abs() < 1e-15));
    }

    #[test]
    fn maxcut_problems_have_empty_aux_block() {
        let p = single_edge(0.5);
        let set = ScheduleSet::from_flat(1, &[0.3, 0.6, 0.9]).unwrap();
        let cfg = TrotterConfig::new(4);
        let c = build_fpc_circuit(&p, &set, &cfg).unwrap();
        assert!(c.ops().iter().all(|g| !matches!(g, Gate::Rz { .. })));
    }

    #[test]
    fn fpc_gate_count_formula() {
        // N * (L + A + n) rotations plus n Hadamards.
        let mut p = IsingProblem::new(4);
        p.add_linear(0, 0.4).unwrap();
        p.add_linear(2, -0.7).unwrap();
        p.add_quadratic(0, 1, 1.0).unwrap();
        p.add_quadratic(1, 2, -0.5).unwrap();
        p.add_quadratic(2, 3, 0.25).unwrap();
        let (l, a, n) = (p.num_terms(), p.num_linear(), p.n());
        for n_layers in [1usize, 3, 5] {
            let cfg = TrotterConfig::new(n_layers);
            let set = ScheduleSet::from_flat(2, &[0.8, 0.3, 0.2, 0.7, 0.1, -0.1]).unwrap();
            let c = build_fpc_circuit(&p, &set, &cfg).unwrap();
            assert_eq!(c.len(), n + n_layers * (l + a + n));
            let h_count = c
                .ops()
                .iter()
                .filter(|g| matches!(g, Gate::H { .. }))
                .count();
            assert_eq!(h_count, n);
        }
    }

    #[test]
    fn qaoa_single_layer_rzz_angle() {
        let p = single_edge(0.5);
        let params = QaoaParams::new(vec![0.0], vec![std::f64::consts::FRAC_PI_2]).unwrap();
        let c = build_qaoa_circuit(&p, &params, 1.0).unwrap();
        let rzz: Vec<&Gate> = c
            .ops()
            .iter()
            .filter(|g| matches!(g, Gate::Rzz { .. }))
            .collect();
        assert_eq!(rzz.len(), 1);
        assert!(matches!(
            rzz[0],
            Gate::Rzz { theta, .. } if (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15
        ));
        // alpha = 0 leaves only zero-angle mixer rotations.
        assert!(c
            .ops()
            .iter()
            .filter_map(|g| match g {
                Gate::Rx { theta, .. } => Some(*theta),
                _ => None,
            })
            .all(|t| t == 0.0));
    }

    #[test]
    fn qaoa_linear_ramp_values() {
        let cfg = TrotterConfig::new(2).with_total_time(2.0);
        let params = QaoaParams::linear_ramp(&cfg).unwrap();
        assert_eq!(params.alphas(), &[0.75, 0.25]);
        assert_eq!(params.betas(), &[0.25, 0.75]);
    }

    #[test]
    fn qaoa_params_validation() {
        assert!(QaoaParams::new(vec![0.1], vec![0.1, 0.2]).is_err());
        assert!(QaoaParams::new(vec![], vec![]).is_err());
        assert!(QaoaParams::from_flat(2, &[0.1, 0.2, 0.3]).is_err());
        let p = QaoaParams::from_flat(2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(p.alphas(), &[0.1, 0.2]);
        assert_eq!(p.betas(), &[0.3, 0.4]);
        assert_eq!(p.to_flat(), vec![0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn trainable_parameter_counts() {
        assert_eq!(count_trainable(AnsatzKind::Fpc, 1), 3);
        assert_eq!(count_trainable(AnsatzKind::Fpc, 3), 9);
        assert_eq!(count_trainable(AnsatzKind::Qaoa, 3), 6);
        // Depth never enters the FPC count.
        for n_layers in 1..=100 {
            let cfg = TrotterConfig::new(n_layers);
            cfg.validate().unwrap();
            assert_eq!(count_trainable(AnsatzKind::Fpc, 2), 6);
        }
    }

    #[test]
    fn trotter_config_validation() {
        assert!(TrotterConfig::new(0).validate().is_err());
        assert!(TrotterConfig::new(3)
            .with_total_time(0.0)
            .validate()
            .is_err());
        assert!(TrotterConfig::new(3).with_epsilon(-1.0).validate().is_err());
        assert!(TrotterConfig::new(3).validate().is_ok());
        assert_eq!(TrotterConfig::new(4).dt(), 0.5);
        assert_eq!(TrotterConfig::new(4).with_total_time(4.0).dt(), 1.0);
    }
}
