//! `fpcqaoa`: benchmark CLI for FPC-QAOA vs standard QAOA.
//!
//! Subcommands: `generate` (instance files), `run` (paired campaign),
//! `report` (aggregate CSVs), `baseline` (random sampling), `schedule-dump`
//! (schedule curves for plotting).
//!
//! Exit codes: 0 success, 2 invalid config, 3 campaign with failed runs,
//! 4 I/O failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fpcqaoa::ScheduleSet;
use fpcqaoa_cli::campaign::{
    baseline_record, cmd_generate, cmd_run, CampaignSpec, CliError, CliResult, Family,
};
use fpcqaoa_cli::report::cmd_report;

#[derive(Parser)]
#[command(name = "fpcqaoa", version, about = "FPC-QAOA / QAOA benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate benchmark instance files.
    Generate(CampaignArgs),
    /// Run the paired QAOA / FPC-QAOA campaign over generated instances.
    Run(CampaignArgs),
    /// Aggregate a finished campaign into plot-ready report CSVs.
    Report {
        /// Campaign output directory holding summary.csv and runs.csv.
        #[arg(long, env = "FPCQAOA_OUT", default_value = "out")]
        out: PathBuf,
    },
    /// Uniform random-sampling baseline on one instance file.
    Baseline {
        /// Instance JSON produced by `generate`.
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        shots: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Export the three schedule curves as CSV (s, F1, F2, F3).
    ScheduleDump {
        /// ScheduleSet JSON file; defaults to the linear ramp.
        #[arg(long)]
        set: Option<PathBuf>,
        /// Control points per schedule for the default linear ramp.
        #[arg(long, default_value_t = 1)]
        np: usize,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out_file: Option<PathBuf>,
    },
}

/// Campaign flags; every flag overrides its config-file counterpart.
#[derive(Args)]
struct CampaignArgs {
    /// Campaign config JSON (same schema as CampaignSpec).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Comma-separated node counts (route counts for TAP).
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Comma-separated Trotter depths.
    #[arg(long, value_delimiter = ',')]
    depths: Option<Vec<usize>>,
    /// FPC control points per schedule.
    #[arg(long)]
    np: Option<usize>,
    /// Instances per (family, size) cell.
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    alpha_cvar: Option<f64>,
    /// Master seed; the entire campaign is a pure function of it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_evals: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long, env = "FPCQAOA_OUT")]
    out: Option<PathBuf>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Total evolution time T (default: T = N/2 per depth).
    #[arg(long)]
    total_time: Option<f64>,
    #[arg(long)]
    tap_density: Option<f64>,
    #[arg(long)]
    tap_penalty: Option<f64>,
}

impl CampaignArgs {
    fn into_spec(self) -> CliResult<CampaignSpec> {
        let mut spec = match &self.config {
            Some(path) => {
                let bytes = fs::read(path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                serde_json::from_slice(&bytes)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => CampaignSpec::desk_scale(),
        };
        if let Some(v) = self.family {
            spec.family = v;
        }
        if let Some(v) = self.sizes {
            spec.sizes = v;
        }
        if let Some(v) = self.depths {
            spec.depths = v;
        }
        if let Some(v) = self.np {
            spec.n_p = v;
        }
        if let Some(v) = self.instances {
            spec.instances_per_cell = v;
        }
        if let Some(v) = self.shots {
            spec.shots = v;
        }
        if let Some(v) = self.alpha_cvar {
            spec.alpha_cvar = v;
        }
        if let Some(v) = self.seed {
            spec.master_seed = v;
        }
        if let Some(v) = self.max_evals {
            spec.max_evals = v;
        }
        if let Some(v) = self.jobs {
            spec.jobs = v;
        }
        if let Some(v) = self.out {
            spec.output_dir = v;
        }
        if let Some(v) = self.epsilon {
            spec.epsilon = v;
        }
        if let Some(v) = self.total_time {
            spec.total_time = Some(v);
        }
        if let Some(v) = self.tap_density {
            spec.tap_density = v;
        }
        if let Some(v) = self.tap_penalty {
            spec.tap_penalty = Some(v);
        }
        Ok(spec)
    }
}

fn schedule_dump(
    set: Option<PathBuf>,
    np: usize,
    points: usize,
    out_file: Option<PathBuf>,
) -> CliResult<()> {
    if points < 2 {
        return Err(CliError::Config("need at least 2 sample points".into()));
    }
    let schedule = match set {
        Some(path) => {
            let bytes = fs::read(&path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            serde_json::from_slice::<ScheduleSet>(&bytes)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ScheduleSet::linear_ramp(np),
    };
    let mut out = String::from("s,F1,F2,F3\n");
    for (s, f1, f2, f3) in schedule.build().sample_curves(points) {
        out.push_str(&format!("{s},{f1},{f2},{f3}\n"));
    }
    match out_file {
        Some(path) => fs::write(&path, out).map_err(|e| CliError::Io { path, source: e }),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Generate(args) => {
            let spec = args.into_spec()?;
            let files = cmd_generate(&spec)?;
            eprintln!(
                "wrote {} instance files under {}",
                files.len(),
                spec.instances_dir().display()
            );
            Ok(0)
        }
        Command::Run(args) => {
            let spec = args.into_spec()?;
            let outcome = cmd_run(&spec)?;
            eprintln!(
                "{} summary rows -> {}",
                outcome.summary.len(),
                spec.summary_path().display()
            );
            if outcome.failures > 0 {
                eprintln!("{} runs failed; their rows are flagged", outcome.failures);
                Ok(3)
            } else {
                Ok(0)
            }
        }
        Command::Report { out } => {
            let (eta, iters) = cmd_report(&out)?;
            for row in &eta {
                println!(
                    "{} n={} N={}: median eta {} mean eta {} (used {}, excluded {})",
                    row.family,
                    row.n,
                    row.n_layers,
                    row.median_eta.map_or("-".into(), |v| format!("{v:.4}")),
                    row.mean_eta.map_or("-".into(), |v| format!("{v:.4}")),
                    row.n_used,
                    row.n_excluded,
                );
            }
            for row in &iters {
                println!(
                    "{} n={} N={} {}: mean iterations {} (converged-only {}, {}/{} converged)",
                    row.family,
                    row.n,
                    row.n_layers,
                    row.algorithm,
                    row.mean_iterations
                        .map_or("-".into(), |v| format!("{v:.1}")),
                    row.mean_iterations_converged
                        .map_or("-".into(), |v| format!("{v:.1}")),
                    row.n_converged,
                    row.n_runs,
                );
            }
            Ok(0)
        }
        Command::Baseline {
            instance,
            shots,
            seed,
        } => {
            let out = baseline_record(&instance, shots, seed)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("serialization is infallible")
            );
            Ok(0)
        }
        Command::ScheduleDump {
            set,
            np,
            points,
            out_file,
        } => {
            schedule_dump(set, np, points, out_file)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
