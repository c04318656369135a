use thiserror::Error;

/// Errors raised by the number-theory oracles, the simulator and the pipelines built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-side precondition does not hold (e.g. a prime handed to the Carmichael test).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The request exceeds a configured size bound.
    #[error("capacity exceeded: {what} = {requested} exceeds limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u128,
        limit: u128,
    },

    #[error("register index {index} out of range for a layout with {registers} registers")]
    RegisterOutOfRange { index: usize, registers: usize },

    #[error("post-selection on an outcome of probability {0:e}")]
    ZeroProbability(f64),

    /// Squared norm drifted away from one; states are never silently renormalised.
    #[error("state norm drifted to {0} after {1}")]
    NormDrift(f64, &'static str),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors that report a size bound rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
