use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operation requires a homogeneous polynomial")]
    NotHomogeneous,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("vector field is not in the span of the frame modulo the sphere relation: {0}")]
    NotInFrameSpan(String),

    #[error("operator `{operator}` does not preserve H^{k}: residual {residual}")]
    NotInvariant { operator: String, k: usize, residual: String },

    #[error("identity check failed: {0}")]
    IdentityFailed(String),

    #[error("spectrum inconsistency: {0}")]
    Spectrum(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("coverage gap: degrees {0:?} are neither solved nor certified")]
    CoverageGap(Vec<usize>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
