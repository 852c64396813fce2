use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] specfam::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix is not self-adjoint: relative defect {defect:e} exceeds {limit:e}")]
    NotSelfAdjoint { defect: f64, limit: f64 },
    #[error("entry ({row}, {col}) has an imaginary part but the mode is real")]
    ComplexInRealMode { row: usize, col: usize },
    #[error("invalid operator spec: {0}")]
    Spec(String),
    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
