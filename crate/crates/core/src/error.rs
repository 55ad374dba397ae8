use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid angular momentum label: {0}")]
    Label(String),

    #[error("invalid Euler angles: {0}")]
    Angles(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("singular linear system while building the S_L basis (L = {order})")]
    Singular { order: usize },

    #[error("series did not converge after {iterations} terms (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("reconstruction produced an invalid state: {0}")]
    Reconstruction(String),

    #[error("asymptotic tomogram is singular at beta = {beta}")]
    Singularity { beta: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
