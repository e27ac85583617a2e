use thiserror::Error;

/// Errors produced by the geometry, analytics and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate simplex: points are affinely dependent (volume {volume:e})")]
    DegenerateSimplex { volume: f64 },

    #[error("cap packing failed: {0}")]
    PackingFailure(String),

    #[error("no statistics: hull is degenerate")]
    NoStatistics,

    #[error("trial {trial} failed after {resamples} degenerate resamples")]
    TrialFailure { trial: u64, resamples: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
