use thiserror::Error;

/// Errors raised by construction, arithmetic, and the check battery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("operators belong to different algebras")]
    AlgebraMismatch,

    #[error("operator is not hermitian (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("operator is not positive (minimum eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("operator is not a projection (defect {defect:.3e})")]
    NotProjection { defect: f64 },

    #[error(
        "operator is not invertible (minimum eigenvalue {min_eig:.3e}, threshold {threshold:.3e})"
    )]
    NotInvertible { min_eig: f64, threshold: f64 },

    #[error("exponent {0} is out of range")]
    InvalidExponent(f64),

    #[error("invalid scalar function: {0}")]
    InvalidScalarFunction(String),

    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),

    #[error("value {value} outside domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error(
        "operation requires a single-block algebra (factor); this algebra has {blocks} blocks"
    )]
    RequiresFactor { blocks: usize },

    #[error("jacobi iteration failed to converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
