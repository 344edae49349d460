use std::path::PathBuf;

use somqual::SomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Missing or unparsable input file.
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Inputs parse but disagree on dimensions.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("computation error: {0}")]
    Computation(#[from] SomError),

    /// Some requested metrics produced error entries; the report was still
    /// written.
    #[error("{} of {total} metrics failed: {}", failed.len(), failed.join(", "))]
    MetricsFailed { failed: Vec<String>, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Io { .. } | CliError::Shape(_) => 1,
            CliError::Config(_) => 2,
            CliError::Computation(_) | CliError::MetricsFailed { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Shape(_) => "shape",
            CliError::Config(_) => "config",
            CliError::Computation(_) | CliError::MetricsFailed { .. } => "computation",
        }
    }

    /// Single-line diagnostic, `error kind=<kind> message=<json string>`.
    pub fn diagnostic(&self) -> String {
        let message = serde_json::to_string(&self.to_string()).unwrap_or_default();
        format!("error kind={} message={}", self.kind(), message)
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
