use thiserror::Error;

/// Errors raised by the bath builders, the root finder and the probe pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exhaustive enumeration would exceed the configuration cap.
    #[error("capacity exceeded: {requested} configurations requested, cap is {cap}")]
    Capacity { requested: u128, cap: u64 },

    /// Simultaneous root iteration ran out of sweeps.
    #[error("root finder did not converge after {sweeps} sweeps (worst residual {worst_residual:e})")]
    NoConvergence { sweeps: usize, worst_residual: f64 },

    /// A numerical self-check failed.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
