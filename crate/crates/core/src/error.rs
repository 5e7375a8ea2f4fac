use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the model.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    /// Two strategies were sampled on grids of different resolution.
    #[error("grid mismatch: expected {expected} intervals, found {found}")]
    GridMismatch { expected: usize, found: usize },

    #[error("singular system in {0}")]
    Singular(&'static str),

    /// A solver finished but its result misses the stated tolerance.
    #[error("{what}: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Tolerance {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        reason,
    }
}
