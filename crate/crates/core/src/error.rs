use std::path::PathBuf;

use thiserror::Error;

use crate::scenario::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Kepler solver did not converge after {iterations} iterations (residual {residual:e} rad)")]
    KeplerNonConvergence { iterations: usize, residual: f64 },

    #[error("invalid orbital elements: {0}")]
    InvalidElements(&'static str),

    #[error("propagation time must be non-negative, got {0} s")]
    NegativeTime(f64),

    #[error("time {0} s is not an instant of the scenario grid")]
    OffGrid(f64),

    #[error("unknown DCP id `{0}`")]
    UnknownDcp(String),

    #[error("unknown satellite id `{0}`")]
    UnknownSatellite(String),

    #[error("satellite id `{0}` is already part of the federation")]
    DuplicateSatellite(String),

    #[error("retirement needs at least 2 satellites, federation has {0}")]
    TooFewSatellites(usize),

    #[error("{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    let mut out = format!("scenario failed validation ({} violations)", violations.len());
    for v in violations {
        out.push_str(&format!("\n  {v}"));
    }
    out
}
