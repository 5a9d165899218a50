use thiserror::Error;

/// Errors raised by the flow library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a formula.
    #[error("{what}: argument {value} is outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The integrator could not advance the solution.
    #[error("integration failed: {0}")]
    Integration(String),

    /// A converged fixed-point root did not match any of the known families.
    #[error("converged root {0:?} matches no known fixed-point family")]
    UnclassifiedFixedPoint([f64; 3]),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
