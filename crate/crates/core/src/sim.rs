//! Exact statevector simulation of the {H, RX, RZ, RZZ} gate set, multinomial
//! shot sampling, and a dense-matrix oracle for validation.
//!
//! Amplitudes are double-precision complex numbers. Basis index bit
//! `n - 1 - q` carries qubit `q`, so the bitstring of an index reads left to
//! right as qubit 0, 1, .... Single-qubit gates update strided amplitude
//! pairs in place; RZ and RZZ are pure phase tables with no amplitude
//! shuffling.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::histogram::ShotHistogram;
use crate::ising::{bitstring_of_index, IsingProblem};
use crate::rng::rng_from_seed;

/// 2^26 amplitudes = 1 GiB; covers every desk-scale experiment.
pub const STATEVECTOR_QUBIT_CAP: usize = 26;

/// The dense oracle builds explicit 2^n x 2^n matrices.
pub const DENSE_ORACLE_QUBIT_CAP: usize = 6;

/// Shot-sampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub shots: u64,
    pub seed: u64,
    pub mode: SimMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimMode {
    /// Finite-shot histograms; objectives see sampling noise.
    Sampled,
    /// Noise-free expectation values straight from the amplitudes.
    ExactExpectation,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            shots: 10_000,
            seed: 0,
            mode: SimMode::Sampled,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mode == SimMode::Sampled && self.shots == 0 {
            return Err(Error::InvalidInput(
                "sampled mode needs at least one shot".into(),
            ));
        }
        Ok(())
    }
}

/// Full quantum state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn zero_state(n: usize) -> Result<Self> {
        if n == 0 || n > STATEVECTOR_QUBIT_CAP {
            return Err(Error::Capacity {
                what: "statevector",
                needed: n,
                cap: STATEVECTOR_QUBIT_CAP,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Ok(StateVector { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn stride_of(&self, q: usize) -> usize {
        1 << (self.n_qubits - 1 - q)
    }

    fn apply_single(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let stride = self.stride_of(q);
        let block = stride * 2;
        for base in (0..self.amps.len()).step_by(block) {
            for off in 0..stride {
                let i0 = base + off;
                let i1 = i0 + stride;
                let x0 = self.amps[i0];
                let x1 = self.amps[i1];
                self.amps[i0] = u[0][0] * x0 + u[0][1] * x1;
                self.amps[i1] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
    }

    fn apply_rz(&mut self, q: usize, theta: f64) {
        let phase0 = Complex64::from_polar(1.0, -0.5 * theta);
        let phase1 = Complex64::from_polar(1.0, 0.5 * theta);
        let stride = self.stride_of(q);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            *amp *= if i & stride == 0 { phase0 } else { phase1 };
        }
    }

    fn apply_rzz(&mut self, q1: usize, q2: usize, theta: f64) {
        let aligned = Complex64::from_polar(1.0, -0.5 * theta);
        let opposed = Complex64::from_polar(1.0, 0.5 * theta);
        let s1 = self.stride_of(q1);
        let s2 = self.stride_of(q2);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            let same = (i & s1 == 0) == (i & s2 == 0);
            *amp *= if same { aligned } else { opposed };
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::H { q } => {
                let x = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_single(q, [[x, x], [x, -x]]);
            }
            Gate::Rx { q, theta } => {
                let c = Complex64::new((0.5 * theta).cos(), 0.0);
                let s = Complex64::new(0.0, -(0.5 * theta).sin());
                self.apply_single(q, [[c, s], [s, c]]);
            }
            Gate::Rz { q, theta } => self.apply_rz(q, theta),
            Gate::Rzz { q1, q2, theta } => self.apply_rzz(q1, q2, theta),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Run a circuit from |0...0> and return the final state.
pub fn run_statevector(circuit: &Circuit) -> Result<StateVector> {
    let mut state = StateVector::zero_state(circuit.n_qubits())?;
    for gate in circuit.ops() {
        state.apply(gate);
    }
    Ok(state)
}

/// Multinomial draw of `cfg.shots` bitstrings from the state's measurement
/// distribution; deterministic under `cfg.seed`.
pub fn sample_histogram(state: &StateVector, cfg: &SimConfig) -> ShotHistogram {
    let mut cumulative = state.probabilities();
    let mut acc = 0.0;
    for p in cumulative.iter_mut() {
        acc += *p;
        *p = acc;
    }
    let total = *cumulative.last().unwrap();
    let mut rng = rng_from_seed(cfg.seed);
    let n = state.n_qubits();
    let mut counts = vec![0u64; state.dim()];
    for _ in 0..cfg.shots {
        let u = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(state.dim() - 1);
        counts[idx] += 1;
    }
    let mut hist = ShotHistogram::new();
    for (idx, &count) in counts.iter().enumerate() {
        if count > 0 {
            hist.record_many(&bitstring_of_index(idx as u64, n), count);
        }
    }
    hist
}

/// `<psi| H_p |psi>` computed exactly from the amplitudes, no sampling.
pub fn exact_expectation(state: &StateVector, problem: &IsingProblem) -> Result<f64> {
    if problem.n() != state.n_qubits() {
        return Err(Error::InvalidInput(format!(
            "problem has {} qubits, state has {}",
            problem.n(),
            state.n_qubits()
        )));
    }
    let mut acc = 0.0;
    for (i, amp) in state.amps.iter().enumerate() {
        let p = amp.norm_sqr();
        if p > 0.0 {
            acc += p * problem.energy_of_index(i as u64);
        }
    }
    Ok(acc)
}

/// Dense square matrix, row-major.
struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

#[allow(clippy::needless_range_loop)]
impl DenseMatrix {
    fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        };
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * other.dim;
        let mut out = vec![Complex64::ZERO; dim * dim];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.data[r1 * self.dim + c1];
                if a == Complex64::ZERO {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        let b = other.data[r2 * other.dim + c2];
                        out[(r1 * other.dim + r2) * dim + (c1 * other.dim + c2)] = a * b;
                    }
                }
            }
        }
        DenseMatrix { dim, data: out }
    }

    fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim;
        let mut out = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..dim {
                    out[r * dim + c] += a * other.data[k * dim + c];
                }
            }
        }
        DenseMatrix { dim, data: out }
    }

    fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; self.dim];
        for r in 0..self.dim {
            let mut acc = Complex64::ZERO;
            for c in 0..self.dim {
                acc += self.data[r * self.dim + c] * v[c];
            }
            out[r] = acc;
        }
        out
    }
}

/// Embed a 2x2 matrix on `target` as a full 2^n matrix: Kronecker chain with
/// qubit 0 as the outermost factor.
fn embed_single(u: [[Complex64; 2]; 2], target: usize, n: usize) -> DenseMatrix {
    let u2 = DenseMatrix {
        dim: 2,
        data: vec![u[0][0], u[0][1], u[1][0], u[1][1]],
    };
    let mut m = DenseMatrix::identity(1);
    for q in 0..n {
        m = if q == target {
            m.kron(&u2)
        } else {
            m.kron(&DenseMatrix::identity(2))
        };
    }
    m
}

fn pauli_z() -> [[Complex64; 2]; 2] {
    [
        [Complex64::ONE, Complex64::ZERO],
        [Complex64::ZERO, -Complex64::ONE],
    ]
}

fn oracle_gate_matrix(gate: &Gate, n: usize) -> DenseMatrix {
    match *gate {
        Gate::H { q } => {
            let x = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            embed_single([[x, x], [x, -x]], q, n)
        }
        Gate::Rx { q, theta } => {
            let c = Complex64::new((0.5 * theta).cos(), 0.0);
            let s = Complex64::new(0.0, -(0.5 * theta).sin());
            embed_single([[c, s], [s, c]], q, n)
        }
        Gate::Rz { q, theta } => {
            let u = [
                [Complex64::from_polar(1.0, -0.5 * theta), Complex64::ZERO],
                [Complex64::ZERO, Complex64::from_polar(1.0, 0.5 * theta)],
            ];
            embed_single(u, q, n)
        }
        Gate::Rzz { q1, q2, theta } => {
            // exp(-i theta/2 * Z_q1 Z_q2): the ZZ product is diagonal with
            // entries +-1, so the exponential acts entrywise on the diagonal.
            let zz = embed_single(pauli_z(), q1, n).matmul(&embed_single(pauli_z(), q2, n));
            let mut m = DenseMatrix::identity(zz.dim);
            for i in 0..zz.dim {
                let sign = zz.data[i * zz.dim + i].re;
                m.data[i * zz.dim + i] = Complex64::from_polar(1.0, -0.5 * theta * sign);
            }
            m
        }
    }
}

/// Reference evolution: build every gate as an explicit 2^n x 2^n matrix via
/// Kronecker products and multiply it into the state. Only for small n;
/// exists to validate [`run_statevector`].
pub fn dense_oracle_evolve(circuit: &Circuit) -> Result<StateVector> {
    let n = circuit.n_qubits();
    if n == 0 || n > DENSE_ORACLE_QUBIT_CAP {
        return Err(Error::Capacity {
            what: "dense oracle",
            needed: n,
            cap: DENSE_ORACLE_QUBIT_CAP,
        });
    }
    let mut amps = vec![Complex64::ZERO; 1 << n];
    amps[0] = Complex64::ONE;
    for gate in circuit.ops() {
        amps = oracle_gate_matrix(gate, n).matvec(&amps);
    }
    Ok(StateVector { n_qubits: n, amps })
}
