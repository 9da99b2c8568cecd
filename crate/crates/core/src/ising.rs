//! Diagonal Ising Hamiltonians, classical energy evaluation, the exact
//! brute-force ground-state oracle, and the performance metrics R and eta.
//!
//! Conventions, fixed once and used everywhere:
//!
//! - bit `0` maps to the sigma-z eigenvalue `+1`, bit `1` to `-1`
//!   (`z = 1 - 2b`, so binary variable `x = 0` corresponds to `z = +1`);
//! - in textual bitstrings qubit 0 is the leftmost character;
//! - a basis index carries qubit `q` in bit `n - 1 - q`, so lexicographic
//!   bitstring order coincides with numeric index order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::ShotHistogram;

/// Hard cap for exhaustive 2^n enumeration (16M states stays interactive).
pub const BRUTE_FORCE_QUBIT_CAP: usize = 24;

/// Diagonal problem Hamiltonian
/// `H = offset + sum_j w_j Z_j + sum_{j<k} g_jk Z_j Z_k`.
///
/// The constant offset is part of the problem (MaxCut's `-|E|/2` term lives
/// here) and is included in every energy evaluation. Quadratic keys are kept
/// canonical (`j < k`) and exact-zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsingProblemRepr", into = "IsingProblemRepr")]
pub struct IsingProblem {
    n: usize,
    linear: BTreeMap<u32, f64>,
    quadratic: BTreeMap<(u32, u32), f64>,
    offset: f64,
}

/// Wire format: `{"n": ..., "linear": [[j, w], ...],
/// "quadratic": [[j, k, g], ...], "offset": ...}` with sorted indices.
#[derive(Serialize, Deserialize)]
struct IsingProblemRepr {
    n: usize,
    linear: Vec<(u32, f64)>,
    quadratic: Vec<(u32, u32, f64)>,
    offset: f64,
}

impl IsingProblem {
    pub fn new(n: usize) -> Self {
        IsingProblem {
            n,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    pub fn add_offset(&mut self, delta: f64) {
        self.offset += delta;
    }

    /// Accumulate `w` onto the linear coefficient of qubit `j`.
    pub fn add_linear(&mut self, j: usize, w: f64) -> Result<()> {
        if j >= self.n {
            return Err(Error::InvalidInput(format!(
                "linear index {j} out of range for n = {}",
                self.n
            )));
        }
        let slot = self.linear.entry(j as u32).or_insert(0.0);
        *slot += w;
        if *slot == 0.0 {
            self.linear.remove(&(j as u32));
        }
        Ok(())
    }

    /// Accumulate `g` onto the coupling of the unordered pair `{j, k}`.
    pub fn add_quadratic(&mut self, j: usize, k: usize, g: f64) -> Result<()> {
        if j == k {
            return Err(Error::InvalidInput(format!(
                "quadratic term needs distinct qubits, got ({j}, {k})"
            )));
        }
        if j >= self.n || k >= self.n {
            return Err(Error::InvalidInput(format!(
                "quadratic pair ({j}, {k}) out of range for n = {}",
                self.n
            )));
        }
        let key = (j.min(k) as u32, j.max(k) as u32);
        let slot = self.quadratic.entry(key).or_insert(0.0);
        *slot += g;
        if *slot == 0.0 {
            self.quadratic.remove(&key);
        }
        Ok(())
    }

    /// Linear terms `(qubit, w)` in ascending qubit order.
    pub fn linear_terms(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.linear.iter().map(|(&j, &w)| (j as usize, w))
    }

    /// Quadratic terms `(j, k, g)` with `j < k` in ascending pair order.
    pub fn quadratic_terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.quadratic
            .iter()
            .map(|(&(j, k), &g)| (j as usize, k as usize, g))
    }

    pub fn num_linear(&self) -> usize {
        self.linear.len()
    }

    pub fn num_quadratic(&self) -> usize {
        self.quadratic.len()
    }

    /// Total stored terms (linear + quadratic), the `L` of gate-count math.
    pub fn num_terms(&self) -> usize {
        self.linear.len() + self.quadratic.len()
    }

    /// Energy of one spin configuration given as 0/1 bits.
    pub fn energy_of_bits(&self, bits: &[u8]) -> Result<f64> {
        if bits.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "bit vector length {} does not match n = {}",
                bits.len(),
                self.n
            )));
        }
        let z = |j: u32| 1.0 - 2.0 * f64::from(bits[j as usize]);
        let mut e = self.offset;
        for (&j, &w) in &self.linear {
            e += w * z(j);
        }
        for (&(j, k), &g) in &self.quadratic {
            e += g * z(j) * z(k);
        }
        Ok(e)
    }

    /// Energy of a textual bitstring (qubit 0 leftmost).
    pub fn energy_of_bitstring(&self, bitstring: &str) -> Result<f64> {
        self.energy_of_bits(&parse_bits(bitstring)?)
    }

    /// Energy of the basis state with the given index (fast path used by the
    /// enumeration oracle and exact expectation values).
    pub fn energy_of_index(&self, index: u64) -> f64 {
        let shift = |j: u32| (self.n - 1) as u64 - u64::from(j);
        let z = |j: u32| 1.0 - 2.0 * ((index >> shift(j)) & 1) as f64;
        let mut e = self.offset;
        for (&j, &w) in &self.linear {
            e += w * z(j);
        }
        for (&(j, k), &g) in &self.quadratic {
            e += g * z(j) * z(k);
        }
        e
    }

    /// `<+...+| H |+...+>`: every Z and ZZ term averages to zero in the
    /// uniform superposition, leaving the offset.
    pub fn uniform_state_energy(&self) -> f64 {
        self.offset
    }

    /// Sample mean of the energy over a shot histogram.
    pub fn expectation_from_histogram(&self, hist: &ShotHistogram) -> Result<f64> {
        hist.ensure_nonempty()?;
        let mut acc = 0.0;
        for (bits, count) in hist.iter() {
            acc += count as f64 * self.energy_of_bitstring(bits)?;
        }
        Ok(acc / hist.total_shots() as f64)
    }

    /// Exact minimum over all 2^n configurations, with the default cap.
    pub fn brute_force_ground(&self) -> Result<GroundState> {
        self.brute_force_ground_capped(BRUTE_FORCE_QUBIT_CAP)
    }

    /// Exact minimum over all 2^n configurations. Ties break toward the
    /// lexicographically smallest bitstring, which under the index convention
    /// is simply the smallest index.
    pub fn brute_force_ground_capped(&self, cap: usize) -> Result<GroundState> {
        if self.n > cap {
            return Err(Error::Capacity {
                what: "brute-force ground state",
                needed: self.n,
                cap,
            });
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("problem has no qubits".into()));
        }
        let mut best_index = 0u64;
        let mut best_energy = self.energy_of_index(0);
        for index in 1..(1u64 << self.n) {
            let e = self.energy_of_index(index);
            if e < best_energy {
                best_energy = e;
                best_index = index;
            }
        }
        Ok(GroundState {
            energy: best_energy,
            bitstring: bitstring_of_index(best_index, self.n),
        })
    }
}

impl TryFrom<IsingProblemRepr> for IsingProblem {
    type Error = Error;

    fn try_from(repr: IsingProblemRepr) -> Result<Self> {
        let mut p = IsingProblem::new(repr.n);
        p.offset = repr.offset;
        for (j, w) in repr.linear {
            if p.linear.contains_key(&j) {
                return Err(Error::InvalidInput(format!("duplicate linear index {j}")));
            }
            p.add_linear(j as usize, w)?;
        }
        for (j, k, g) in repr.quadratic {
            let key = (j.min(k), j.max(k));
            if p.quadratic.contains_key(&key) {
                return Err(Error::InvalidInput(format!(
                    "duplicate quadratic pair ({j}, {k})"
                )));
            }
            p.add_quadratic(j as usize, k as usize, g)?;
        }
        Ok(p)
    }
}

impl From<IsingProblem> for IsingProblemRepr {
    fn from(p: IsingProblem) -> Self {
        IsingProblemRepr {
            n: p.n,
            linear: p.linear.iter().map(|(&j, &w)| (j, w)).collect(),
            quadratic: p.quadratic.iter().map(|(&(j, k), &g)| (j, k, g)).collect(),
            offset: p.offset,
        }
    }
}

/// Result of the exhaustive ground-state search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub energy: f64,
    pub bitstring: String,
}

/// Per-run performance numbers. `eta` is only present when a run has been
/// paired against a reference run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    /// `<psi(0)| H |psi(0)>` of the uniform initial state.
    pub e_init: f64,
    /// Achieved final expectation value.
    pub e_final: f64,
    /// Exact minimum eigenvalue from the brute-force oracle.
    pub e_ground: f64,
    /// Normalized energy reduction.
    pub r_value: f64,
    /// Enhancement ratio against a paired reference run.
    pub eta: Option<f64>,
}

impl MetricsRecord {
    pub fn from_energies(e_init: f64, e_final: f64, e_ground: f64) -> Result<Self> {
        Ok(MetricsRecord {
            e_init,
            e_final,
            e_ground,
            r_value: compute_r(e_init, e_final, e_ground)?,
            eta: None,
        })
    }
}

/// Normalized energy reduction `R = (e_init - e_final) / (e_init - e_ground)`.
///
/// Not clipped: values outside [0, 1] for `e_final` within `[e_ground,
/// e_init]` signal a bug upstream.
pub fn compute_r(e_init: f64, e_final: f64, e_ground: f64) -> Result<f64> {
    if e_init <= e_ground {
        return Err(Error::DegenerateInstance(e_init));
    }
    Ok((e_init - e_final) / (e_init - e_ground))
}

/// Enhancement ratio `eta = r_fpc / r_qaoa`; undefined for `r_qaoa <= 0`.
pub fn compute_eta(r_fpc: f64, r_qaoa: f64) -> Result<f64> {
    if r_qaoa <= 0.0 {
        return Err(Error::EtaUndefined { r_qaoa });
    }
    Ok(r_fpc / r_qaoa)
}

/// Parse a textual bitstring into 0/1 bytes.
pub fn parse_bits(bitstring: &str) -> Result<Vec<u8>> {
    bitstring
        .chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidInput(format!(
                "invalid bitstring character {other:?}"
            ))),
        })
        .collect()
}

/// Render a basis-state index as a bitstring with qubit 0 leftmost.
pub fn bitstring_of_index(index: u64, n: usize) -> String {
    (0..n)
        .map(|q| {
            if (index >> (n - 1 - q)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;

    /// Problem for a single MaxCut edge (0, 1): g = 0.5, offset = -0.5.
    fn single_edge() -> IsingProblem {
        let mut p = IsingProblem::new(2);
        p.add_quadratic(0, 1, 0.5).unwrap();
        p.add_offset(-0.5);
        p
    }

    fn ring(n: usize, coupling: f64) -> IsingProblem {
        let mut p = IsingProblem::new(n);
        for j in 0..n {
            p.add_quadratic(j, (j + 1) % n, coupling).unwrap();
        }
        p
    }

    #[test]
    fn energy_single_edge() {
        let p = single_edge();
        assert_eq!(p.energy_of_bitstring("01").unwrap(), -1.0);
        assert_eq!(p.energy_of_bitstring("10").unwrap(), -1.0);
        assert_eq!(p.energy_of_bitstring("00").unwrap(), 0.0);
        assert_eq!(p.energy_of_bitstring("11").unwrap(), 0.0);
    }

    #[test]
    fn energy_ring_three() {
        // All couplings 1: "010" has bonds (0,1) and (1,2) anti-aligned,
        // (0,2) aligned.
        let p = ring(3, 1.0);
        assert_eq!(p.energy_of_bitstring("010").unwrap(), -1.0);
    }

    #[test]
    fn energy_length_mismatch_rejected() {
        let p = single_edge();
        assert!(p.energy_of_bits(&[0]).is_err());
        assert!(p.energy_of_bitstring("012").is_err());
    }

    #[test]
    fn expectation_from_histogram_examples() {
        let p = single_edge();
        let mut h = ShotHistogram::new();
        h.record_many("01", 10);
        assert_eq!(p.expectation_from_histogram(&h).unwrap(), -1.0);

        let mut h = ShotHistogram::new();
        h.record_many("00", 5);
        h.record_many("01", 5);
        assert_eq!(p.expectation_from_histogram(&h).unwrap(), -0.5);

        let mut h = ShotHistogram::new();
        for b in ["00", "01", "10", "11"] {
            h.record_many(b, 3);
        }
        assert_eq!(p.expectation_from_histogram(&h).unwrap(), -0.5);

        assert!(p.expectation_from_histogram(&ShotHistogram::new()).is_err());
    }

    #[test]
    fn brute_force_triangle_maxcut() {
        // MaxCut coefficients on K3: the max cut is 2.
        let mut p = IsingProblem::new(3);
        for (j, k) in [(0, 1), (1, 2), (0, 2)] {
            p.add_quadratic(j, k, 0.5).unwrap();
            p.add_offset(-0.5);
        }
        let g = p.brute_force_ground().unwrap();
        assert_eq!(g.energy, -2.0);
    }

    #[test]
    fn brute_force_single_spin() {
        let mut p = IsingProblem::new(1);
        p.add_linear(0, 0.7).unwrap();
        let g = p.brute_force_ground().unwrap();
        assert_eq!(g.energy, -0.7);
        assert_eq!(g.bitstring, "1");
    }

    #[test]
    fn brute_force_ferromagnetic_tie_break() {
        let mut p = IsingProblem::new(2);
        p.add_quadratic(0, 1, -1.0).unwrap();
        let g = p.brute_force_ground().unwrap();
        assert_eq!(g.energy, -1.0);
        // "00" and "11" tie; lexicographically smallest wins.
        assert_eq!(g.bitstring, "00");
    }

    #[test]
    fn brute_force_cap() {
        let p = IsingProblem::new(5);
        assert!(matches!(
            p.brute_force_ground_capped(4),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn compute_r_examples() {
        assert_eq!(compute_r(0.0, -2.0, -2.0).unwrap(), 1.0);
        assert_eq!(compute_r(0.0, 0.0, -2.0).unwrap(), 0.0);
        assert_eq!(compute_r(-0.5, -1.5, -2.5).unwrap(), 0.5);
        assert!(matches!(
            compute_r(-2.0, -2.0, -2.0),
            Err(Error::DegenerateInstance(_))
        ));
    }

    #[test]
    fn compute_eta_examples() {
        assert_eq!(compute_eta(0.8, 0.8).unwrap(), 1.0);
        assert_eq!(compute_eta(0.9, 0.6).unwrap(), 1.5);
        assert_eq!(compute_eta(0.0, 0.5).unwrap(), 0.0);
        assert!(matches!(
            compute_eta(0.5, 0.0),
            Err(Error::EtaUndefined { .. })
        ));
        assert!(compute_eta(0.5, -0.1).is_err());
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut p = IsingProblem::new(3);
        p.add_linear(1, 0.5).unwrap();
        p.add_linear(1, -0.5).unwrap();
        p.add_quadratic(0, 2, 1.0).unwrap();
        p.add_quadratic(2, 0, -1.0).unwrap();
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn serialization_is_canonical() {
        let mut p = IsingProblem::new(4);
        p.add_quadratic(3, 1, 0.25).unwrap();
        p.add_quadratic(2, 0, -1.5).unwrap();
        p.add_linear(2, 0.1).unwrap();
        p.add_offset(-2.0);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"linear":[[2,0.1]],"quadratic":[[0,2,-1.5],[1,3,0.25]],"offset":-2.0}"#
        );
        let back: IsingProblem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn deserialization_rejects_bad_input() {
        let dup = r#"{"n":2,"linear":[],"quadratic":[[0,1,1.0],[1,0,2.0]],"offset":0.0}"#;
        assert!(serde_json::from_str::<IsingProblem>(dup).is_err());
        let out_of_range = r#"{"n":2,"linear":[[2,1.0]],"quadratic":[],"offset":0.0}"#;
        assert!(serde_json::from_str::<IsingProblem>(out_of_range).is_err());
        let diag = r#"{"n":2,"linear":[],"quadratic":[[1,1,1.0]],"offset":0.0}"#;
        assert!(serde_json::from_str::<IsingProblem>(diag).is_err());
    }

    /// Kronecker product of diagonal vectors.
    fn kron_diag(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                out.push(x * y);
            }
        }
        out
    }

    /// Diagonal of the dense Hamiltonian built independently by Kronecker
    /// products (qubit 0 is the outermost factor, matching the index
    /// convention).
    fn dense_diagonal(p: &IsingProblem) -> Vec<f64> {
        let n = p.n();
        let dim = 1usize << n;
        let z = [1.0, -1.0];
        let id = [1.0, 1.0];
        let embed = |targets: &[usize]| {
            let mut d = vec![1.0];
            for q in 0..n {
                let factor: &[f64] = if targets.contains(&q) { &z } else { &id };
                d = kron_diag(&d, factor);
            }
            d
        };
        let mut diag = vec![p.offset(); dim];
        for (j, w) in p.linear_terms() {
            let d = embed(&[j]);
            for i in 0..dim {
                diag[i] += w * d[i];
            }
        }
        for (j, k, g) in p.quadratic_terms() {
            let d = embed(&[j, k]);
            for i in 0..dim {
                diag[i] += g * d[i];
            }
        }
        diag
    }

    fn random_problem(n: usize, seed: u64) -> IsingProblem {
        let mut rng = rng_from_seed(seed);
        let mut p = IsingProblem::new(n);
        for j in 0..n {
            if rng.random::<f64>() < 0.7 {
                p.add_linear(j, rng.random_range(-1.0..=1.0)).unwrap();
            }
        }
        for j in 0..n {
            for k in (j + 1)..n {
                if rng.random::<f64>() < 0.5 {
                    p.add_quadratic(j, k, rng.random_range(-1.0..=1.0)).unwrap();
                }
            }
        }
        p.add_offset(rng.random_range(-1.0..=1.0));
        p
    }

    #[test]
    fn energy_matches_dense_kronecker_diagonal() {
        for n in 1..=6 {
            for seed in 0..4 {
                let p = random_problem(n, 100 * n as u64 + seed);
                let diag = dense_diagonal(&p);
                for index in 0..(1u64 << n) {
                    let direct = p.energy_of_index(index);
                    let bits = parse_bits(&bitstring_of_index(index, n)).unwrap();
                    assert_eq!(direct, p.energy_of_bits(&bits).unwrap());
                    assert!(
                        (direct - diag[index as usize]).abs() < 1e-12,
                        "n={n} seed={seed} index={index}: {direct} vs {}",
                        diag[index as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn ground_state_bounds_random_bitstrings() {
        let p = random_problem(8, 99);
        let ground = p.brute_force_ground().unwrap();
        let mut rng = rng_from_seed(7);
        for _ in 0..1000 {
            let idx: u64 = rng.random_range(0..(1u64 << 8));
            assert!(ground.energy <= p.energy_of_index(idx) + 1e-12);
        }
    }

    #[test]
    fn global_spin_flip_preserves_ground_energy() {
        // Flipping the sign of every linear coefficient maps each state's
        // energy to that of its complement, so the minimum is unchanged.
        for seed in 0..100 {
            let n = 3 + (seed as usize % 8);
            let p = random_problem(n, 1000 + seed);
            let mut flipped = IsingProblem::new(n);
            flipped.add_offset(p.offset());
            for (j, w) in p.linear_terms() {
                flipped.add_linear(j, -w).unwrap();
            }
            for (j, k, g) in p.quadratic_terms() {
                flipped.add_quadratic(j, k, g).unwrap();
            }
            let g0 = p.brute_force_ground().unwrap();
            let g1 = flipped.brute_force_ground().unwrap();
            assert!(
                (g0.energy - g1.energy).abs() < 1e-12,
                "seed {seed}: {} vs {}",
                g0.energy,
                g1.energy
            );
        }
    }

    proptest! {
        #[test]
        fn r_is_affine_invariant(
            e_init in -10.0..10.0f64,
            drop1 in 0.1..5.0f64,
            drop2 in 0.1..5.0f64,
            shift in -10.0..10.0f64,
        ) {
            let e_final = e_init - drop1;
            let e_ground = e_final - drop2;
            let r = compute_r(e_init, e_final, e_ground).unwrap();
            let r_shifted =
                compute_r(e_init + shift, e_final + shift, e_ground + shift).unwrap();
            prop_assert!((r - r_shifted).abs() < 1e-12);
        }
    }
}
