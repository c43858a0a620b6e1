use std::fmt;

use soiltherm::Error;

/// Process exit codes.
pub const OK: i32 = 0;
pub const CONFIG: i32 = 2;
pub const INPUT: i32 = 3;
pub const SOLVER: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self { code: CONFIG, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { code: INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.code {
            CONFIG => "configuration error",
            INPUT => "input data error",
            SOLVER => "solver error",
            _ => "error",
        };
        write!(f, "{kind}: {}", self.message)
    }
}

/// Which exit code a library error maps to. Bare domain errors count as
/// configuration problems for `simulate` and as bad data elsewhere.
#[derive(Debug, Clone, Copy)]
pub enum Stage {
    Config,
    Data,
}

pub fn classify(stage: Stage) -> impl Fn(Error) -> CliError {
    move |e| {
        let code = match &e {
            Error::StepSize { .. } | Error::Divergence { .. } => SOLVER,
            Error::Config(_) | Error::Validation(_) | Error::UnitDomain(_) => CONFIG,
            Error::Parse { .. }
            | Error::Roi { .. }
            | Error::AuxCoverage(_)
            | Error::Empty(_)
            | Error::Io { .. }
            | Error::Csv(_) => INPUT,
            Error::Domain { .. } => match stage {
                Stage::Config => CONFIG,
                Stage::Data => INPUT,
            },
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_error(path: &std::path::Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::input(format!("{}: {e}", path.display()))
}

pub fn output_error(path: &std::path::Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError { code: 1, message: format!("cannot write {}: {e}", path.display()) }
}
