use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("operator is not positive: eigenvalue {eigenvalue:e} below tolerance {tolerance:e}")]
    NotPositive { eigenvalue: f64, tolerance: f64 },
    #[error("operator is not bounded below by one: smallest eigenvalue {eigenvalue:e}")]
    NotBoundedBelowByOne { eigenvalue: f64 },
    #[error("membership is undefined for the zero vector")]
    ZeroVector,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subspace is trivial: {0}")]
    TrivialSubspace(&'static str),
    #[error("eigenvector for eigenvalue {eigenvalue:e} failed the growth-rate cross-check at level {lambda:e} (estimate {estimate:e})")]
    CrossCheck {
        eigenvalue: f64,
        lambda: f64,
        estimate: f64,
    },
    #[error("vector is not in F(A, {n}): ||E(n)x - x|| = {defect:e}; smallest admissible cap is {suggested}")]
    OutsideCap { n: u64, defect: f64, suggested: u64 },
    #[error("embeddings do not form an orthogonal decomposition: {0}")]
    BadEmbedding(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
