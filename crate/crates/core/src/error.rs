use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single failed invariant, addressed by a dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

fn join_intervals(v: &[(f64, f64)]) -> String {
    v.iter()
        .map(|(a, b)| format!("[{a}, {b}]"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unit domain error: {0}")]
    UnitDomain(String),

    #[error("domain error in `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("validation failed: {}", join_violations(.0))]
    Validation(Vec<Violation>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("time step {dt} s exceeds the explicit stability bound; use dt <= {max_dt:.6} s")]
    StepSize { dt: f64, max_dt: f64 },

    #[error("solver diverged at step {step}: {reason}")]
    Divergence { step: usize, reason: String },

    #[error("{source_name}: parse error at row {row}, column {col}: {reason}")]
    Parse {
        source_name: String,
        row: usize,
        col: usize,
        reason: String,
    },

    #[error("invalid region `{name}`: {reason}")]
    Roi { name: String, reason: String },

    #[error("auxiliary channels do not cover frame times; uncovered intervals (s): {}", join_intervals(.0))]
    AuxCoverage(Vec<(f64, f64)>),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Checks that `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(name, format!("must be finite and >= 0, got {value}")))
    }
}
