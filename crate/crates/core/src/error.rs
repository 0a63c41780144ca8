use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative evaluation did not reach its tolerance.
    #[error("{what} failed to converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A pivot vanished during a direct solve.
    #[error("singular system: {0}")]
    Singular(String),

    /// A quantity that must be finite was not.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A time step was requested before its predecessors were computed.
    #[error("interval {requested} requested but only {available} intervals are solved")]
    MissingHistory { requested: usize, available: usize },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
