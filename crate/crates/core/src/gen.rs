//! Seedable benchmark-instance generators: random k-regular MaxCut,
//! weighted cycle/star/wheel Ising, and Tail Assignment instances with their
//! QUBO-to-Ising reduction.
//!
//! Generators are pure functions of their spec and seed; the same inputs
//! produce byte-identical serialized problems. Draw order within each
//! generator is fixed and documented on the function.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::IsingProblem;
use crate::rng::rng_from_seed;

/// Restart budget for configuration-model rejection sampling.
const REGULAR_GRAPH_ATTEMPTS: usize = 10_000;

/// Graph family for the Ising generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// Random k-regular graph (configuration model).
    KRegular(usize),
    /// Cycle with periodic boundary.
    Cycle,
    /// Star: hub plus leaves.
    Star,
    /// Wheel: hub plus a cycle over the rim nodes.
    Wheel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub topology: Topology,
    pub n: usize,
    pub seed: u64,
}

impl GraphSpec {
    pub fn new(topology: Topology, n: usize, seed: u64) -> Self {
        GraphSpec { topology, n, seed }
    }

    fn validate(&self) -> Result<()> {
        match self.topology {
            Topology::KRegular(k) => {
                if self.n < 2 || k == 0 || k >= self.n {
                    return Err(Error::InvalidSpec(format!(
                        "k-regular needs 1 <= k < n, got k = {k}, n = {}",
                        self.n
                    )));
                }
                if !(self.n * k).is_multiple_of(2) {
                    return Err(Error::InvalidSpec(format!(
                        "k-regular needs n*k even, got n = {}, k = {k}",
                        self.n
                    )));
                }
            }
            Topology::Cycle if self.n < 3 => {
                return Err(Error::InvalidSpec("cycle needs n >= 3".into()));
            }
            Topology::Star if self.n < 2 => {
                return Err(Error::InvalidSpec("star needs n >= 2".into()));
            }
            Topology::Wheel if self.n < 4 => {
                return Err(Error::InvalidSpec("wheel needs n >= 4".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Sample a simple k-regular graph with the configuration model: pair node
/// stubs after a shuffle, restart on any self-loop or duplicate edge.
fn sample_regular_edges(n: usize, k: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let mut rng = rng_from_seed(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    for _ in 0..REGULAR_GRAPH_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let mut edges = std::collections::BTreeSet::new();
        let mut ok = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !edges.insert((u.min(v), u.max(v))) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(edges.into_iter().collect());
        }
    }
    Err(Error::GenerationFailure(format!(
        "no simple {k}-regular graph on {n} nodes within {REGULAR_GRAPH_ATTEMPTS} attempts"
    )))
}

/// MaxCut on a random k-regular graph: each edge contributes `+0.5 Z_j Z_k`
/// and `-0.5` to the offset, so the energy of a configuration is minus its
/// cut size.
pub fn gen_maxcut(spec: &GraphSpec) -> Result<IsingProblem> {
    spec.validate()?;
    let k = match spec.topology {
        Topology::KRegular(k) => k,
        other => {
            return Err(Error::InvalidSpec(format!(
                "gen_maxcut needs a k-regular spec, got {other:?}"
            )))
        }
    };
    let edges = sample_regular_edges(spec.n, k, spec.seed)?;
    let mut p = IsingProblem::new(spec.n);
    for (j, l) in edges {
        p.add_quadratic(j, l, 0.5)?;
        p.add_offset(-0.5);
    }
    Ok(p)
}

/// Weighted Ising Hamiltonian on a cycle, star, or wheel.
///
/// Every node carries a local field and every graph edge a coupling, all
/// drawn independently and uniformly from [-1, 1]. The hub of star and wheel
/// graphs is node 0. Draw order: local fields by ascending node, then spoke
/// couplings, then (wheel only) rim couplings.
pub fn gen_topology_ising(spec: &GraphSpec) -> Result<IsingProblem> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = rng_from_seed(spec.seed);
    let mut draw = move || rng.random_range(-1.0..=1.0);
    let mut p = IsingProblem::new(n);
    for j in 0..n {
        p.add_linear(j, draw())?;
    }
    match spec.topology {
        Topology::Cycle => {
            for j in 0..n {
                p.add_quadratic(j, (j + 1) % n, draw())?;
            }
        }
        Topology::Star => {
            for j in 1..n {
                p.add_quadratic(0, j, draw())?;
            }
        }
        Topology::Wheel => {
            for j in 1..n {
                p.add_quadratic(0, j, draw())?;
            }
            // Rim cycle over nodes 1..n-1; the wrap bond closes back to 1.
            for j in 1..n {
                let next = if j == n - 1 { 1 } else { j + 1 };
                p.add_quadratic(j, next, draw())?;
            }
        }
        Topology::KRegular(_) => {
            return Err(Error::InvalidSpec(
                "gen_topology_ising needs cycle, star, or wheel".into(),
            ));
        }
    }
    Ok(p)
}

/// Generation parameters for a Tail Assignment instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TapSpec {
    pub n_routes: usize,
    /// Defaults to `5 * n_routes`.
    pub n_flights: Option<usize>,
    /// Coverage penalty P; defaults to `max(costs) + 1` so one uncovered
    /// flight always costs more than the costliest route.
    pub penalty: Option<f64>,
    /// Route cost bounds, default [2, 10].
    pub cost_range: (f64, f64),
    /// Bernoulli probability that a route covers a flight, in (0, 1].
    pub density: f64,
    pub seed: u64,
}

impl TapSpec {
    pub fn new(n_routes: usize, density: f64, seed: u64) -> Self {
        TapSpec {
            n_routes,
            n_flights: None,
            penalty: None,
            cost_range: (2.0, 10.0),
            density,
            seed,
        }
    }
}

/// A Tail Assignment instance: cover every flight by selected routes at
/// minimum cost, with quadratic penalty P on coverage violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TapInstance {
    pub n_routes: usize,
    pub n_flights: usize,
    pub costs: Vec<f64>,
    /// Row-major incidence, `incidence[f][r] = 1` iff route r covers flight f.
    pub incidence: Vec<Vec<u8>>,
    pub penalty: f64,
}

impl TapInstance {
    /// The QUBO cost
    /// `Q(x) = sum_r c_r x_r + P * sum_f (1 - sum_r a_fr x_r)^2`
    /// for a binary route selection. Independent of the Ising reduction; the
    /// reduction is validated against it.
    pub fn qubo_cost(&self, selection: &[u8]) -> Result<f64> {
        if selection.len() != self.n_routes {
            return Err(Error::InvalidInput(format!(
                "selection length {} does not match {} routes",
                selection.len(),
                self.n_routes
            )));
        }
        let mut cost = 0.0;
        for (r, &x) in selection.iter().enumerate() {
            cost += self.costs[r] * f64::from(x);
        }
        for row in &self.incidence {
            let covered: i64 = row
                .iter()
                .zip(selection)
                .map(|(&a, &x)| i64::from(a) * i64::from(x))
                .sum();
            let gap = 1 - covered;
            cost += self.penalty * (gap * gap) as f64;
        }
        Ok(cost)
    }

    /// Coverage statistics: (mean routes per flight, mean flights per route).
    pub fn coverage_stats(&self) -> (f64, f64) {
        let total: u64 = self
            .incidence
            .iter()
            .flat_map(|row| row.iter().map(|&a| u64::from(a)))
            .sum();
        (
            total as f64 / self.n_flights as f64,
            total as f64 / self.n_routes as f64,
        )
    }
}

/// Generate a random TAP instance.
///
/// Draw order: route costs by ascending route, then the incidence matrix in
/// row-major order (flight outer, route inner), then one uniform route index
/// per initially-uncovered flight, in ascending flight order.
pub fn gen_tap(spec: &TapSpec) -> Result<TapInstance> {
    if spec.n_routes == 0 {
        return Err(Error::InvalidSpec("TAP needs at least one route".into()));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "TAP density must be in (0, 1], got {}",
            spec.density
        )));
    }
    let (lo, hi) = spec.cost_range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidSpec(format!("bad cost range [{lo}, {hi}]")));
    }
    let n_flights = spec.n_flights.unwrap_or(5 * spec.n_routes);
    if n_flights == 0 {
        return Err(Error::InvalidSpec("TAP needs at least one flight".into()));
    }
    if let Some(p) = spec.penalty {
        if !(p > 0.0) {
            return Err(Error::InvalidSpec(format!("penalty must be > 0, got {p}")));
        }
    }

    let mut rng = rng_from_seed(spec.seed);
    let costs: Vec<f64> = (0..spec.n_routes)
        .map(|_| rng.random_range(lo..=hi))
        .collect();
    let mut incidence: Vec<Vec<u8>> = (0..n_flights)
        .map(|_| {
            (0..spec.n_routes)
                .map(|_| u8::from(rng.random::<f64>() < spec.density))
                .collect()
        })
        .collect();
    // Repair: every flight must have at least one covering route.
    for row in incidence.iter_mut() {
        if row.iter().all(|&a| a == 0) {
            let r = rng.random_range(0..spec.n_routes);
            row[r] = 1;
        }
    }
    let penalty = spec
        .penalty
        .unwrap_or_else(|| costs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0);
    Ok(TapInstance {
        n_routes: spec.n_routes,
        n_flights,
        costs,
        incidence,
        penalty,
    })
}

/// Exact Ising form of the TAP QUBO under `x_r = (1 - z_r) / 2`:
///
/// - `h_r = -c_r/2 - (P/2) * sum_f a_fr (A_f - 2)` with `A_f` the number of
///   routes covering flight f;
/// - `J_rr' = (P/2) * sum_f a_fr a_fr'` for each unordered pair;
/// - the constant offset is fixed by matching the empty selection, so the
///   Ising energy equals `Q(x)` for every assignment, not just up to a
///   constant.
pub fn tap_to_ising(tap: &TapInstance) -> Result<IsingProblem> {
    let n = tap.n_routes;
    let mut p = IsingProblem::new(n);
    let coverage: Vec<i64> = tap
        .incidence
        .iter()
        .map(|row| row.iter().map(|&a| i64::from(a)).sum())
        .collect();

    let mut linear_sum = 0.0;
    for r in 0..n {
        let weighted: i64 = tap
            .incidence
            .iter()
            .zip(&coverage)
            .map(|(row, &a_f)| i64::from(row[r]) * (a_f - 2))
            .sum();
        let h = -0.5 * tap.costs[r] - 0.5 * tap.penalty * weighted as f64;
        linear_sum += h;
        p.add_linear(r, h)?;
    }

    let mut coupling_sum = 0.0;
    for r in 0..n {
        for s in (r + 1)..n {
            let overlap: i64 = tap
                .incidence
                .iter()
                .map(|row| i64::from(row[r]) * i64::from(row[s]))
                .sum();
            if overlap != 0 {
                let j = 0.5 * tap.penalty * overlap as f64;
                coupling_sum += j;
                p.add_quadratic(r, s, j)?;
            }
        }
    }

    // Q at the all-zero selection is P per flight; the all-zero selection is
    // the all-(z = +1) spin state.
    let q_empty = tap.penalty * tap.n_flights as f64;
    p.set_offset(q_empty - linear_sum - coupling_sum);
    Ok(p)
}

/// On-disk instance format: the problem, provenance metadata, and for TAP
/// the raw costs/incidence so the QUBO cost can be re-derived.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub problem: IsingProblem,
    pub meta: InstanceMeta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tap: Option<TapInstance>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub generator: String,
    pub seed: u64,
    pub params: serde_json::Value,
}
