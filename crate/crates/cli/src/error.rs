use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] jnu_core::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("config: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Arg(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for validation failures, 3 for numeric-regime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric_regime() => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
