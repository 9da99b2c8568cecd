//! Campaign definition, instance generation, and the paired-run engine.
//!
//! All randomness flows from `master_seed` through the documented split
//! chain: `cell = derive(derive(master, family_tag), size)`, `instance =
//! derive(cell, index)`, `run = derive(instance, 1000 + depth)`, `sampling =
//! derive(run, 2)`. QAOA and FPC-QAOA share the run and sampling seeds of
//! their pair, so comparisons are seed-matched by construction.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fpcqaoa::gen::{self, InstanceFile, InstanceMeta, TapSpec};
use fpcqaoa::rng::derive_seed;
use fpcqaoa::{
    compute_eta, run_fpc, run_qaoa, run_random_sampling, GraphSpec, InitStrategy, IsingProblem,
    ObjectiveConfig, OptimizerConfig, RunRecord, SimConfig, SimMode, Topology, TrotterConfig,
};

use crate::content_hash;

/// CLI/campaign failure with its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: unusable configuration or spec.
    Config(String),
    /// Exit 4: filesystem failure, with path context.
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid config: {msg}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 4,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Benchmark instance family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Random k-regular MaxCut with k = n/2.
    Maxcut,
    Cycle,
    Star,
    Wheel,
    Tap,
}

impl Family {
    pub fn tag(self) -> u64 {
        match self {
            Family::Maxcut => 0,
            Family::Cycle => 1,
            Family::Star => 2,
            Family::Wheel => 3,
            Family::Tap => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Maxcut => "maxcut",
            Family::Cycle => "cycle",
            Family::Star => "star",
            Family::Wheel => "wheel",
            Family::Tap => "tap",
        }
    }
}

/// One experiment campaign. Serialized form doubles as the config-file
/// format; every CLI flag overrides its field here.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignSpec {
    pub family: Family,
    /// Node counts (route counts for TAP).
    pub sizes: Vec<usize>,
    /// Trotter depths N.
    pub depths: Vec<usize>,
    /// FPC schedule control points per schedule.
    pub n_p: usize,
    pub instances_per_cell: usize,
    pub shots: u64,
    pub alpha_cvar: f64,
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub max_evals: usize,
    pub tol: f64,
    pub rho_beg: f64,
    pub epsilon: f64,
    /// Evolution time T; `None` means T = N/2 per depth (dt = 1/2).
    pub total_time: Option<f64>,
    pub tap_density: f64,
    pub tap_penalty: Option<f64>,
    /// Worker threads; 0 lets the pool pick.
    pub jobs: usize,
}

impl Default for CampaignSpec {
    /// Config-file defaults; note `instances_per_cell = 100` matches the
    /// paper-scale campaigns, while the bare CLI defaults to the desk-scale
    /// 20 (see [`CampaignSpec::desk_scale`]).
    fn default() -> Self {
        CampaignSpec {
            family: Family::Maxcut,
            sizes: vec![10],
            depths: vec![3],
            n_p: 1,
            instances_per_cell: 100,
            shots: 10_000,
            alpha_cvar: 0.25,
            master_seed: 1,
            output_dir: PathBuf::from("out"),
            max_evals: 250,
            tol: 1e-3,
            rho_beg: 0.5,
            epsilon: 1.0,
            total_time: None,
            tap_density: 0.3,
            tap_penalty: None,
            jobs: 0,
        }
    }
}

impl CampaignSpec {
    /// Defaults for ad-hoc CLI use: 20 instances per cell, everything else
    /// as in [`Default`].
    pub fn desk_scale() -> Self {
        CampaignSpec {
            instances_per_cell: 20,
            ..CampaignSpec::default()
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.sizes.is_empty() || self.depths.is_empty() {
            return Err(CliError::Config(
                "sizes and depths must be non-empty".into(),
            ));
        }
        if self.instances_per_cell == 0 {
            return Err(CliError::Config("instances_per_cell must be >= 1".into()));
        }
        if !(self.alpha_cvar > 0.0 && self.alpha_cvar <= 1.0) {
            return Err(CliError::Config(format!(
                "alpha_cvar must be in (0, 1], got {}",
                self.alpha_cvar
            )));
        }
        if self.shots == 0 {
            return Err(CliError::Config("shots must be >= 1".into()));
        }
        if self.depths.contains(&0) {
            return Err(CliError::Config("depths must be >= 1".into()));
        }
        if self.n_p == 0 {
            return Err(CliError::Config("n_p must be >= 1".into()));
        }
        if !(self.tol > 0.0 && self.rho_beg > self.tol) {
            return Err(CliError::Config(format!(
                "need 0 < tol < rho_beg, got tol = {}, rho_beg = {}",
                self.tol, self.rho_beg
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(CliError::Config("epsilon must be > 0".into()));
        }
        for &size in &self.sizes {
            if self.family == Family::Maxcut {
                self.maxcut_degree(size)?;
            }
        }
        Ok(())
    }

    /// k = n/2, stepped down until n*k is even; benchmark grids use even n,
    /// where this is exact.
    fn maxcut_degree(&self, n: usize) -> CliResult<usize> {
        let mut k = n / 2;
        if n % 2 == 1 && k % 2 == 1 {
            k -= 1;
        }
        if k == 0 || k >= n {
            return Err(CliError::Config(format!(
                "no valid degree k = n/2 for MaxCut size {n}"
            )));
        }
        Ok(k)
    }

    pub fn instances_dir(&self) -> PathBuf {
        self.output_dir.join("instances")
    }

    pub fn runs_dir(&self) -> PathBuf {
        self.output_dir.join("runs")
    }

    pub fn summary_path(&self) -> PathBuf {
        self.output_dir.join("summary.csv")
    }

    pub fn runs_csv_path(&self) -> PathBuf {
        self.output_dir.join("runs.csv")
    }

    pub fn instance_path(&self, size: usize, index: usize) -> PathBuf {
        self.instances_dir().join(format!(
            "{}_n{size:03}_i{index:03}.json",
            self.family.name()
        ))
    }

    fn instance_seed(&self, size: usize, index: usize) -> u64 {
        let cell = derive_seed(
            derive_seed(self.master_seed, self.family.tag()),
            size as u64,
        );
        derive_seed(cell, index as u64)
    }

    /// Generate the (size, index) instance of this campaign.
    pub fn build_instance(&self, size: usize, index: usize) -> CliResult<InstanceFile> {
        let seed = self.instance_seed(size, index);
        let core_err = |e: fpcqaoa::Error| CliError::Config(e.to_string());
        let (problem, tap, params) = match self.family {
            Family::Maxcut => {
                let k = self.maxcut_degree(size)?;
                let spec = GraphSpec::new(Topology::KRegular(k), size, seed);
                let p = gen::gen_maxcut(&spec).map_err(core_err)?;
                (p, None, serde_json::json!({ "n": size, "k": k }))
            }
            Family::Cycle | Family::Star | Family::Wheel => {
                let topology = match self.family {
                    Family::Cycle => Topology::Cycle,
                    Family::Star => Topology::Star,
                    _ => Topology::Wheel,
                };
                let spec = GraphSpec::new(topology, size, seed);
                let p = gen::gen_topology_ising(&spec).map_err(core_err)?;
                (p, None, serde_json::json!({ "n": size }))
            }
            Family::Tap => {
                let mut spec = TapSpec::new(size, self.tap_density, seed);
                spec.penalty = self.tap_penalty;
                let tap = gen::gen_tap(&spec).map_err(core_err)?;
                let p = gen::tap_to_ising(&tap).map_err(core_err)?;
                let (per_flight, per_route) = tap.coverage_stats();
                let params = serde_json::json!({
                    "n_routes": size,
                    "n_flights": tap.n_flights,
                    "density": self.tap_density,
                    "penalty": tap.penalty,
                    "mean_routes_per_flight": per_flight,
                    "mean_flights_per_route": per_route,
                });
                (p, Some(tap), params)
            }
        };
        Ok(InstanceFile {
            problem,
            meta: InstanceMeta {
                generator: self.family.name().to_string(),
                seed,
                params: serde_json::json!({
                    "master_seed": self.master_seed,
                    "index": index,
                    "spec": params,
                }),
            },
            tap,
        })
    }
}

fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut f = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(bytes).map_err(|e| CliError::io(path, e))
}

fn to_pretty_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serialization is infallible");
    bytes.push(b'\n');
    bytes
}

/// Write one JSON instance file per (size, index); reruns with the same
/// master seed overwrite byte-identically.
pub fn cmd_generate(spec: &CampaignSpec) -> CliResult<Vec<PathBuf>> {
    spec.validate()?;
    let mut written = Vec::new();
    for &size in &spec.sizes {
        for index in 0..spec.instances_per_cell {
            let instance = spec.build_instance(size, index)?;
            let path = spec.instance_path(size, index);
            write_bytes(&path, &to_pretty_json(&instance))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// One row of `summary.csv`: a seed-matched QAOA / FPC-QAOA pair on one
/// instance at one depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_layers: usize,
    pub n_p: usize,
    pub instance: usize,
    pub r_qaoa: Option<f64>,
    pub r_fpc: Option<f64>,
    pub eta: Option<f64>,
    pub iters_qaoa: Option<usize>,
    pub iters_fpc: Option<usize>,
    /// True when eta is undefined (R_qaoa <= 0) or either run failed.
    pub excluded_flag: bool,
    pub instance_hash: String,
}

/// One row of `runs.csv`: a single algorithm run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunCsvRow {
    pub instance: String,
    pub algorithm: String,
    #[serde(rename = "N")]
    pub n_layers: usize,
    pub n_p: Option<usize>,
    pub iterations: usize,
    pub e_final: Option<f64>,
    pub r: Option<f64>,
    pub pairing_id: String,
    pub converged: bool,
}

pub struct RunOutcome {
    pub summary: Vec<SummaryRow>,
    pub run_rows: Vec<RunCsvRow>,
    /// Count of runs that errored (campaign continues; exit code 3).
    pub failures: usize,
}

struct PairResult {
    row: SummaryRow,
    run_rows: Vec<RunCsvRow>,
    records: Vec<(String, RunRecord)>,
    failures: usize,
}

fn pairing_id(spec: &CampaignSpec, size: usize, index: usize, depth: usize) -> String {
    format!("{}_n{size:03}_i{index:03}_N{depth:02}", spec.family.name())
}

fn run_pair(
    spec: &CampaignSpec,
    instance: &InstanceFile,
    hash: &str,
    size: usize,
    index: usize,
    depth: usize,
) -> PairResult {
    let trotter = TrotterConfig {
        n_layers: depth,
        total_time: spec.total_time.unwrap_or(0.5 * depth as f64),
        epsilon: spec.epsilon,
    };
    let run_seed = derive_seed(instance.meta.seed, 1000 + depth as u64);
    let sim = SimConfig {
        shots: spec.shots,
        seed: derive_seed(run_seed, 2),
        mode: SimMode::Sampled,
    };
    let obj = ObjectiveConfig {
        alpha_cvar: spec.alpha_cvar,
        ..ObjectiveConfig::default()
    };
    let opt = OptimizerConfig {
        max_evals: spec.max_evals,
        tol: spec.tol,
        rho_beg: spec.rho_beg,
    };
    let pid = pairing_id(spec, size, index, depth);

    let qaoa = run_qaoa(
        &instance.problem,
        &trotter,
        &sim,
        &obj,
        &opt,
        InitStrategy::LinearRamp,
        run_seed,
    );
    let fpc = run_fpc(
        &instance.problem,
        spec.n_p,
        &trotter,
        &sim,
        &obj,
        &opt,
        InitStrategy::Random,
        run_seed,
    );

    let mut failures = 0;
    let mut run_rows = Vec::new();
    let mut records = Vec::new();
    let mut extract = |name: &str, res: &Result<RunRecord, fpcqaoa::Error>| match res {
        Ok(rec) => {
            run_rows.push(RunCsvRow {
                instance: format!("{}_n{size:03}_i{index:03}", spec.family.name()),
                algorithm: name.to_string(),
                n_layers: depth,
                n_p: rec.meta.n_p,
                iterations: rec.iterations,
                e_final: rec.metrics.as_ref().map(|m| m.e_final),
                r: rec.metrics.as_ref().map(|m| m.r_value),
                pairing_id: pid.clone(),
                converged: rec.converged,
            });
            records.push((format!("{pid}_{name}.json"), rec.clone()));
            rec.metrics.as_ref().map(|m| (m.r_value, rec.iterations))
        }
        Err(e) => {
            eprintln!("run failed ({pid}, {name}): {e}");
            failures += 1;
            None
        }
    };
    let q = extract("qaoa", &qaoa);
    let f = extract("fpc", &fpc);

    let (eta, excluded) = match (q, f) {
        (Some((rq, _)), Some((rf, _))) => match compute_eta(rf, rq) {
            Ok(eta) => (Some(eta), false),
            Err(_) => (None, true),
        },
        _ => (None, true),
    };

    PairResult {
        row: SummaryRow {
            family: spec.family.name().to_string(),
            n: size,
            n_layers: depth,
            n_p: spec.n_p,
            instance: index,
            r_qaoa: q.map(|(r, _)| r),
            r_fpc: f.map(|(r, _)| r),
            eta,
            iters_qaoa: q.map(|(_, i)| i),
            iters_fpc: f.map(|(_, i)| i),
            excluded_flag: excluded,
            instance_hash: hash.to_string(),
        },
        run_rows,
        records,
        failures,
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Config(format!("csv: {other:?}")),
    })?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Config(format!("csv serialize: {e}")))?;
    }
    writer.flush().map_err(|e| CliError::io(path, e))
}

/// Run the paired campaign over pre-generated instances; writes per-run JSON
/// records, `runs.csv`, and `summary.csv`.
pub fn cmd_run(spec: &CampaignSpec) -> CliResult<RunOutcome> {
    spec.validate()?;

    // Load every instance up front; missing files are hard I/O errors.
    let mut instances = Vec::new();
    for &size in &spec.sizes {
        for index in 0..spec.instances_per_cell {
            let path = spec.instance_path(size, index);
            let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            let parsed: InstanceFile = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            instances.push((size, index, content_hash(&bytes), parsed));
        }
    }

    let mut jobs = Vec::new();
    for (size, index, hash, instance) in &instances {
        for &depth in &spec.depths {
            jobs.push((*size, *index, hash.as_str(), instance, depth));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let results: Vec<PairResult> = pool.install(|| {
        jobs.par_iter()
            .map(|&(size, index, hash, instance, depth)| {
                run_pair(spec, instance, hash, size, index, depth)
            })
            .collect()
    });

    let runs_dir = spec.runs_dir();
    let mut summary = Vec::new();
    let mut run_rows = Vec::new();
    let mut failures = 0;
    for result in results {
        for (name, record) in &result.records {
            write_bytes(&runs_dir.join(name), &to_pretty_json(record))?;
        }
        summary.push(result.row);
        run_rows.extend(result.run_rows);
        failures += result.failures;
    }
    summary.sort_by(|a, b| (a.n, a.n_layers, a.instance).cmp(&(b.n, b.n_layers, b.instance)));
    run_rows.sort_by(|a, b| (&a.pairing_id, &a.algorithm).cmp(&(&b.pairing_id, &b.algorithm)));

    write_csv(&spec.summary_path(), &summary)?;
    write_csv(&spec.runs_csv_path(), &run_rows)?;
    Ok(RunOutcome {
        summary,
        run_rows,
        failures,
    })
}

/// Random-sampling baseline output, mirroring the hardware-table schema
/// (average energy, best observed energy).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BaselineOutput {
    pub instance: String,
    pub n_qubits: usize,
    pub shots: u64,
    pub seed: u64,
    pub avg_energy: f64,
    pub best_energy: f64,
}

/// Load an instance file and run the uniform random-sampling baseline on it.
pub fn baseline_record(instance_path: &Path, shots: u64, seed: u64) -> CliResult<BaselineOutput> {
    let bytes = fs::read(instance_path).map_err(|e| CliError::io(instance_path, e))?;
    let parsed: InstanceFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Config(format!("{}: {e}", instance_path.display())))?;
    baseline_for_problem(
        &parsed.problem,
        instance_path.display().to_string(),
        shots,
        seed,
    )
}

pub fn baseline_for_problem(
    problem: &IsingProblem,
    label: String,
    shots: u64,
    seed: u64,
) -> CliResult<BaselineOutput> {
    let sim = SimConfig {
        shots,
        seed,
        mode: SimMode::Sampled,
    };
    let rec =
        run_random_sampling(problem, &sim, seed).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(BaselineOutput {
        instance: label,
        n_qubits: problem.n(),
        shots,
        seed,
        avg_energy: rec.value_trace[0],
        best_energy: rec.best_energy.expect("sampled run always has outcomes"),
    })
}
