use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] stfresh_core::Error),

    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: String,
        source: std::io::Error,
    },

    #[error("malformed config: {0}")]
    ParseConfig(#[from] serde_json::Error),

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    /// 2 for usage and configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Model(stfresh_core::Error::NonConvergentTruncation(_)) => ExitCode::from(3),
            CliError::Write(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
