//! Aggregate statistics over a finished campaign: per-cell enhancement-ratio
//! medians/means and per-algorithm iteration counts, in plot-ready CSV form.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::campaign::{CliError, CliResult, RunCsvRow, SummaryRow};

/// Enhancement-ratio aggregate for one (family, n, N) cell. Cells whose rows
/// are all excluded report empty statistics rather than NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaReportRow {
    pub family: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_layers: usize,
    pub median_eta: Option<f64>,
    pub mean_eta: Option<f64>,
    pub n_used: usize,
    pub n_excluded: usize,
}

/// Iteration-count aggregate for one (family, n, N, algorithm) cell, with
/// the converged-only variant alongside the all-runs mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterReportRow {
    pub family: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub n_layers: usize,
    pub algorithm: String,
    pub mean_iterations: Option<f64>,
    pub mean_iterations_converged: Option<f64>,
    pub n_runs: usize,
    pub n_converged: usize,
}

pub fn median(sorted: &[f64]) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    })
}

fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        None
    } else {
        Some(values.iter().sum::<f64>() / values.len() as f64)
    }
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<Vec<T>> {
    let file = fs::File::open(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::Io {
            path: path.to_path_buf(),
            source: io,
        },
        other => CliError::Config(format!("csv: {other:?}")),
    })?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| CliError::Config(format!("csv serialize: {e}")))?;
    }
    writer.flush().map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

pub fn aggregate_eta(summary: &[SummaryRow]) -> Vec<EtaReportRow> {
    let mut cells: Vec<(String, usize, usize)> = summary
        .iter()
        .map(|r| (r.family.clone(), r.n, r.n_layers))
        .collect();
    cells.sort();
    cells.dedup();

    cells
        .into_iter()
        .map(|(family, n, n_layers)| {
            let rows: Vec<&SummaryRow> = summary
                .iter()
                .filter(|r| r.family == family && r.n == n && r.n_layers == n_layers)
                .collect();
            let mut etas: Vec<f64> = rows
                .iter()
                .filter(|r| !r.excluded_flag)
                .filter_map(|r| r.eta)
                .collect();
            etas.sort_by(f64::total_cmp);
            let n_excluded = rows.iter().filter(|r| r.excluded_flag).count();
            EtaReportRow {
                family,
                n,
                n_layers,
                median_eta: median(&etas),
                mean_eta: mean(&etas),
                n_used: etas.len(),
                n_excluded,
            }
        })
        .collect()
}

pub fn aggregate_iterations(run_rows: &[RunCsvRow]) -> Vec<IterReportRow> {
    let mut cells: Vec<(String, usize, String)> = run_rows
        .iter()
        .map(|r| {
            (
                instance_family(&r.instance),
                r.n_layers,
                r.algorithm.clone(),
            )
        })
        .collect();
    cells.sort();
    cells.dedup();

    // Recover n from the instance id (family_nXXX_iYYY).
    cells
        .into_iter()
        .map(|(family, n_layers, algorithm)| {
            let rows: Vec<&RunCsvRow> = run_rows
                .iter()
                .filter(|r| {
                    instance_family(&r.instance) == family
                        && r.n_layers == n_layers
                        && r.algorithm == algorithm
                })
                .collect();
            let n = rows
                .first()
                .and_then(|r| instance_size(&r.instance))
                .unwrap_or(0);
            let all: Vec<f64> = rows.iter().map(|r| r.iterations as f64).collect();
            let converged: Vec<f64> = rows
                .iter()
                .filter(|r| r.converged)
                .map(|r| r.iterations as f64)
                .collect();
            IterReportRow {
                family,
                n,
                n_layers,
                algorithm,
                mean_iterations: mean(&all),
                mean_iterations_converged: mean(&converged),
                n_runs: all.len(),
                n_converged: converged.len(),
            }
        })
        .collect()
}

fn instance_family(instance_id: &str) -> String {
    instance_id
        .split("_n")
        .next()
        .unwrap_or(instance_id)
        .to_string()
}

fn instance_size(instance_id: &str) -> Option<usize> {
    let rest = instance_id.split("_n").nth(1)?;
    rest.split('_').next()?.parse().ok()
}

/// Read `summary.csv` and `runs.csv` from `out_dir`, write `report_eta.csv`
/// and `report_iters.csv` next to them, and return both tables.
pub fn cmd_report(out_dir: &Path) -> CliResult<(Vec<EtaReportRow>, Vec<IterReportRow>)> {
    let summary: Vec<SummaryRow> = read_csv(&out_dir.join("summary.csv"))?;
    if summary.is_empty() {
        return Err(CliError::Config("summary.csv holds no rows".into()));
    }
    let run_rows: Vec<RunCsvRow> = read_csv(&out_dir.join("runs.csv"))?;
    let eta = aggregate_eta(&summary);
    let iters = aggregate_iterations(&run_rows);
    write_csv(&out_dir.join("report_eta.csv"), &eta)?;
    write_csv(&out_dir.join("report_iters.csv"), &iters)?;
    Ok((eta, iters))
}
