use std::path::PathBuf;

use iwasawa_core::lambda_mod::LambdaError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("scan bound must be at least 5, got {0}")]
    ScanBound(u64),
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("corrupt cache entry {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
