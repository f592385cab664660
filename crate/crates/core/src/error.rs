use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("{what} = {requested} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("index {0} occurs in both the positive and the complemented set")]
    OverlappingProduct(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no cover with at most {k_cap} generators exists (lc_B > {k_cap})")]
    CoverNotFound { k_cap: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("name `{0}` cannot be written in LP format")]
    UnrepresentableName(String),

    #[error("failed to launch solver `{command}`: {source}")]
    SolverLaunch {
        command: String,
        #[source]
        source: std::io::Error,
    },

    #[error("solver exited with status {status}: {stderr}")]
    SolverFailed { status: String, stderr: String },

    #[error("cannot parse solver output {path}: {message}")]
    SolverOutput { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification, used by the CLI to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    BadInput,
    CapExceeded,
    Bridge,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::CapExceeded { .. } | Error::CoverNotFound { .. } => ErrorKind::CapExceeded,
            Error::SolverLaunch { .. } | Error::SolverFailed { .. } | Error::SolverOutput { .. } => ErrorKind::Bridge,
            _ => ErrorKind::BadInput,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
