use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A protocol or configuration violates a structural rule.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An operation was requested in a state where it is not defined,
    /// e.g. efficiency outside the heat-engine regime.
    #[error("invalid state: {0}")]
    State(String),

    #[error("efficiency undefined: hot component energy change is zero")]
    UndefinedEfficiency,

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    /// A numerical invariant was breached (trace, positivity, probabilities).
    #[error("numerical consistency failure: {0}")]
    Consistency(String),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
