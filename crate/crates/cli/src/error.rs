use std::path::PathBuf;

use thiserror::Error;

/// Everything that makes a command exit with status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: at {pointer}: {message}")]
    Schema {
        path: PathBuf,
        pointer: String,
        message: String,
    },
    #[error("{path}: reference {target:?} does not resolve: {message}")]
    Reference {
        path: PathBuf,
        target: String,
        message: String,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] lr_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;
