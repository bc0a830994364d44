use thiserror::Error;

use crate::sdp::SolveStatus;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    /// Parameters outside the region where a formula or construction is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two-distance hypothesis eps <= threshold failed.
    #[error("hypothesis violated: eps = {eps} exceeds threshold {threshold}")]
    Hypothesis { eps: f64, threshold: f64 },

    #[error("channel is not CPTP: {0}")]
    NotChannel(String),

    #[error("unsupported input dimension {0} (only qubit inputs are supported)")]
    UnsupportedDimension(usize),

    #[error("SDP solver stopped with status {status:?}")]
    Solver { status: SolveStatus },

    #[error("malformed problem: {0}")]
    Malformed(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;
