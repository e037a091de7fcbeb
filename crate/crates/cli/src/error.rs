use std::io;
use std::path::Path;

use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Numeric(#[from] bellsim::Error),
}

impl CliError {
    /// 1 for usage, config and I/O problems; 2 for numeric or domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numeric(_) => 2,
        }
    }

    pub fn io(path: Option<&Path>, source: io::Error) -> Self {
        let path = path.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
        CliError::Io { path, source }
    }
}

pub type CliResult<T> = Result<T, CliError>;
