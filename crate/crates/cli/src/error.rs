use std::path::PathBuf;

use scatter_depth::DepthError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: cannot read: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: expected {expected} columns, found {found}")]
    RaggedRows { line: usize, expected: usize, found: usize },

    #[error("dataset contains no observations")]
    EmptyDataset,

    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Depth(#[from] DepthError),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    /// Short machine-readable label.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Io { .. } | CliError::Output(_) => "io",
            CliError::Parse { .. } | CliError::RaggedRows { .. } | CliError::EmptyDataset => "input",
            CliError::Validation(_) => "validation",
            CliError::Depth(e) if e.is_numeric() => "numeric",
            CliError::Depth(DepthError::DeadlineExceeded) => "timeout",
            CliError::Depth(_) => "validation",
        }
    }

    /// Process exit code: 2 validation, 3 numeric, 4 input and I/O.
    pub fn exit_code(&self) -> u8 {
        match self.category() {
            "numeric" => 3,
            "io" | "input" => 4,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
