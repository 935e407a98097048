//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("site index {site} out of range for {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("duplicate or overlapping site indices")]
    OverlappingSites,

    #[error("register of {0} basis states exceeds the dense budget of 2^24")]
    BudgetExceeded(usize),

    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("matrix is not unitary: deviation {0:.3e}")]
    NotUnitary(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("not a valid distribution: {0}")]
    InvalidDistribution(String),

    #[error("conditioning on zero-probability outcome")]
    ZeroProbabilityCondition,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("ground state is degenerate (gap {gap:.3e} below threshold)")]
    DegenerateGroundState { gap: f64 },

    #[error("overflow guard tripped: {0}")]
    OverflowGuard(String),

    #[error("state has negative or complex amplitudes beyond tolerance")]
    NotSignFree,
}

pub type Result<T> = std::result::Result<T, Error>;
