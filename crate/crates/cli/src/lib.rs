//! Workspace format, command dispatch and reporting for the `diarep` binary.

pub mod commands;
pub mod workspace;

use diarep::report::ValidationReport;
use thiserror::Error;

/// Failures of the command-line layer; each maps to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unresolved {kind} `{name}`")]
    UnresolvedReference { kind: &'static str, name: String },
    #[error("{subject} fails validation")]
    ValidationFailure { subject: String, report: ValidationReport },
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("`{op}` needs argument `{arg}`")]
    MissingArgument { op: String, arg: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Math(#[from] diarep::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 1 for mathematical failures, 2 for input errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailure { .. } | CliError::Math(_) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::UnresolvedReference { .. } => "UnresolvedReference",
            CliError::ValidationFailure { .. } => "ValidationFailure",
            CliError::UnknownCommand(_) => "UnknownCommand",
            CliError::MissingArgument { .. } => "MissingArgument",
            CliError::Input(_) => "InputError",
            CliError::Math(_) => "MathError",
            CliError::Io(_) => "IoError",
        }
    }

    /// Input error with context for a failed construction while loading.
    pub fn input(context: impl std::fmt::Display, e: diarep::Error) -> CliError {
        CliError::Input(format!("{context}: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
