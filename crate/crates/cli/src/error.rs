use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error(transparent)]
    Core(#[from] hierperc::Error),

    #[error("{0}")]
    Usage(String),

    #[error("N^K = {vertices} vertices exceeds the limit of {limit} (raise it with --max-vertices)")]
    TooLarge { vertices: u64, limit: u64 },

    #[error("{failures} comparison(s) failed their hard tolerance")]
    HardFailures { failures: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    /// 1 for usage and configuration problems, 2 for domain errors and
    /// failed acceptance checks.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(hierperc::Error::Domain(_) | hierperc::Error::RecursionBreakdown { .. }) => 2,
            CliError::HardFailures { .. } => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
