//! Command-line front end.
//!
//! Exit codes: 0 when every rule passes (or the decision is favourable),
//! 1 when some rule fails, 2 on input or validation errors. Machine-readable
//! JSON goes to stdout; human tables go to stderr when it is a terminal.

use std::fs::{self, File};
use std::io::{BufWriter, IsTerminal};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::access::write_windows_csv;
use crate::error::{Error, Result};
use crate::federation::{evaluate_candidate, reconfigure_on_fault, retire_minimal_impact};
use crate::metrics::{
    compliance_table, evaluate, metrics_json, serialize_extended, write_per_dcp_csv, write_per_satellite_csv,
    FigureOfMeritReport,
};
use crate::scenario::{load_satellite, parse_scenario, validate_scenario, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fedsat", version, about = "Federated satellite coverage and access simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// metrics.json only
    Json,
    /// metrics.json plus per_dcp.csv and per_satellite.csv
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and write windows and metrics
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the grid step (seconds)
        #[arg(long)]
        step_s: Option<f64>,
        /// Override the horizon length from grid start (seconds)
        #[arg(long)]
        horizon_s: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide whether a candidate satellite may join
    Admit { scenario: PathBuf, candidate: PathBuf },
    /// Pick the satellite whose removal hurts coverage least
    Retire { scenario: PathBuf },
    /// Re-plan duty-cycle phases after a satellite fault
    Fault {
        scenario: PathBuf,
        failed_id: String,
        fault_time_s: f64,
    },
    /// Per-DCP coverage and revisit of two scenarios side by side
    Compare { scenario_a: PathBuf, scenario_b: PathBuf },
    /// Parse and validate a scenario
    Validate { scenario: PathBuf },
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Simulate {
            scenario,
            out,
            step_s,
            horizon_s,
            format,
        } => {
            let overrides = Overrides {
                step_s,
                horizon_s,
                format,
            };
            let report = cmd_simulate(&scenario, &out, &overrides)?;
            print_json(&report);
            Ok(report.exit_code)
        }
        Command::Admit { scenario, candidate } => {
            let (scenario, _) = read_scenario(&scenario)?;
            let candidate = load_satellite(&candidate)?;
            if scenario.satellite(&candidate.id).is_some() {
                return Err(Error::DuplicateSatellite(candidate.id));
            }
            let violations = validate_scenario(&scenario.with_satellite(candidate.clone()));
            if !violations.is_empty() {
                return Err(Error::Validation(violations));
            }
            let decision = evaluate_candidate(&scenario, &candidate)?;
            print_json(&decision);
            if stderr_is_tty() && !decision.failed_rules.is_empty() {
                eprint!("{}", compliance_table(&decision.failed_rules));
            }
            Ok(if decision.accepted { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Retire { scenario } => {
            let (scenario, _) = read_scenario(&scenario)?;
            let plan = retire_minimal_impact(&scenario)?;
            print_json(&plan);
            Ok(if plan.still_compliant { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Fault {
            scenario,
            failed_id,
            fault_time_s,
        } => {
            let (scenario, _) = read_scenario(&scenario)?;
            let result = reconfigure_on_fault(&scenario, &failed_id, fault_time_s)?;
            print_json(&result);
            if stderr_is_tty() {
                eprint!("{}", compliance_table(&result.failed_rules_after));
            }
            Ok(if result.compliant_after { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Compare { scenario_a, scenario_b } => {
            let (a, _) = read_scenario(&scenario_a)?;
            let (b, _) = read_scenario(&scenario_b)?;
            let comparison = compare(&evaluate(&a)?.report, &evaluate(&b)?.report);
            print_json(&comparison);
            if stderr_is_tty() {
                eprint!("{}", comparison_table(&comparison));
            }
            Ok(EXIT_OK)
        }
        Command::Validate { scenario } => {
            let (scenario, _) = read_scenario(&scenario)?;
            eprintln!(
                "valid: {} satellites, {} DCPs, {} ground stations, {} instants",
                scenario.satellites.len(),
                scenario.dcps.len(),
                scenario.ground_stations.len(),
                scenario.grid.count()
            );
            Ok(EXIT_OK)
        }
    }
}

fn stderr_is_tty() -> bool {
    std::io::stderr().is_terminal()
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("output serializes"));
}

/// Parsed and validated scenario plus the SHA-256 of its file contents.
pub fn read_scenario(path: &Path) -> Result<(Scenario, String)> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((parse_scenario(&text, path)?, digest))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overrides {
    pub step_s: Option<f64>,
    pub horizon_s: Option<f64>,
    pub format: Format,
}

impl Overrides {
    pub fn apply(&self, scenario: &mut Scenario) -> Result<()> {
        if let Some(step) = self.step_s {
            scenario.grid.step_s = step;
        }
        if let Some(horizon) = self.horizon_s {
            scenario.grid.end_s = scenario.grid.start_s + horizon;
        }
        let violations = validate_scenario(scenario);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(violations))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplianceSummary {
    pub passed: usize,
    pub failed: usize,
    pub failed_rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario_path: PathBuf,
    pub scenario_digest: String,
    pub overrides: Overrides,
    pub windows_csv_path: PathBuf,
    pub metrics_json_path: PathBuf,
    pub per_dcp_csv_path: Option<PathBuf>,
    pub per_satellite_csv_path: Option<PathBuf>,
    pub compliance_summary: ComplianceSummary,
    pub exit_code: i32,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Runs the pipeline on one scenario file and writes its outputs into `out_dir`.
pub fn cmd_simulate(scenario_path: &Path, out_dir: &Path, overrides: &Overrides) -> Result<RunReport> {
    let (mut scenario, digest) = read_scenario(scenario_path)?;
    overrides.apply(&mut scenario)?;
    let evaluation = evaluate(&scenario)?;

    fs::create_dir_all(out_dir).map_err(io_error(out_dir))?;
    let windows_csv_path = out_dir.join("windows.csv");
    let metrics_json_path = out_dir.join("metrics.json");
    write_windows_csv(create(&windows_csv_path)?, &evaluation.solution.windows)?;
    fs::write(&metrics_json_path, metrics_json(&evaluation.report, &evaluation.compliance))
        .map_err(io_error(&metrics_json_path))?;

    let (per_dcp_csv_path, per_satellite_csv_path) = match overrides.format {
        Format::Json => (None, None),
        Format::Csv => {
            let dcp = out_dir.join("per_dcp.csv");
            let sat = out_dir.join("per_satellite.csv");
            write_per_dcp_csv(create(&dcp)?, &evaluation.report)?;
            write_per_satellite_csv(create(&sat)?, &evaluation.report)?;
            (Some(dcp), Some(sat))
        }
    };

    if stderr_is_tty() {
        eprint!("{}", compliance_table(&evaluation.compliance));
    }
    let failures = evaluation.failures();
    let mut failed_rules: Vec<String> = failures.iter().map(|c| c.rule.to_string()).collect();
    failed_rules.dedup();
    Ok(RunReport {
        scenario_path: scenario_path.to_path_buf(),
        scenario_digest: digest,
        overrides: overrides.clone(),
        windows_csv_path,
        metrics_json_path,
        per_dcp_csv_path,
        per_satellite_csv_path,
        compliance_summary: ComplianceSummary {
            passed: evaluation.compliance.len() - failures.len(),
            failed: failures.len(),
            failed_rules,
        },
        exit_code: if failures.is_empty() { EXIT_OK } else { EXIT_FAIL },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcpComparison {
    pub dcp_id: String,
    pub coverage_a: Option<f64>,
    pub coverage_b: Option<f64>,
    pub coverage_delta: Option<f64>,
    #[serde(serialize_with = "serialize_optional")]
    pub max_revisit_a_s: Option<f64>,
    #[serde(serialize_with = "serialize_optional")]
    pub max_revisit_b_s: Option<f64>,
    #[serde(serialize_with = "serialize_optional")]
    pub max_revisit_delta_s: Option<f64>,
}

fn serialize_optional<S: serde::Serializer>(value: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => serialize_extended(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub per_dcp: Vec<DcpComparison>,
    pub dcp_coverage_fraction_a: f64,
    pub dcp_coverage_fraction_b: f64,
    pub dcp_coverage_fraction_delta: f64,
}

fn delta(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        b - a
    }
}

/// DCPs of both reports, matched by id; deltas are `b - a`.
pub fn compare(a: &FigureOfMeritReport, b: &FigureOfMeritReport) -> Comparison {
    let mut ids: Vec<&String> = a.per_dcp.keys().chain(b.per_dcp.keys()).collect();
    ids.sort();
    ids.dedup();
    let per_dcp = ids
        .into_iter()
        .map(|id| {
            let da = a.per_dcp.get(id);
            let db = b.per_dcp.get(id);
            let both = |f: fn(f64, f64) -> f64, x: Option<f64>, y: Option<f64>| x.zip(y).map(|(x, y)| f(x, y));
            let cov_a = da.map(|d| d.temporal_coverage_fraction);
            let cov_b = db.map(|d| d.temporal_coverage_fraction);
            let rev_a = da.map(|d| d.max_revisit_s);
            let rev_b = db.map(|d| d.max_revisit_s);
            DcpComparison {
                dcp_id: id.clone(),
                coverage_a: cov_a,
                coverage_b: cov_b,
                coverage_delta: both(delta, cov_a, cov_b),
                max_revisit_a_s: rev_a,
                max_revisit_b_s: rev_b,
                max_revisit_delta_s: both(delta, rev_a, rev_b),
            }
        })
        .collect();
    Comparison {
        per_dcp,
        dcp_coverage_fraction_a: a.federation.dcp_coverage_fraction,
        dcp_coverage_fraction_b: b.federation.dcp_coverage_fraction,
        dcp_coverage_fraction_delta: delta(a.federation.dcp_coverage_fraction, b.federation.dcp_coverage_fraction),
    }
}

pub fn comparison_table(c: &Comparison) -> String {
    let cell = |v: Option<f64>, digits: usize| match v {
        Some(v) if v.is_finite() => format!("{v:.digits$}"),
        Some(v) => format!("{v}"),
        None => "-".to_string(),
    };
    let mut out = format!(
        "{:<16} {:>10} {:>10} {:>10} {:>14} {:>14} {:>14}\n",
        "dcp_id", "cov_a", "cov_b", "cov_delta", "revisit_a_s", "revisit_b_s", "revisit_delta_s"
    );
    for d in &c.per_dcp {
        out.push_str(&format!(
            "{:<16} {:>10} {:>10} {:>10} {:>14} {:>14} {:>14}\n",
            d.dcp_id,
            cell(d.coverage_a, 4),
            cell(d.coverage_b, 4),
            cell(d.coverage_delta, 4),
            cell(d.max_revisit_a_s, 1),
            cell(d.max_revisit_b_s, 1),
            cell(d.max_revisit_delta_s, 1),
        ));
    }
    out
}
