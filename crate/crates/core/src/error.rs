use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result does not fit in an `f64`.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An iterative routine hit its evaluation cap.
    #[error("no convergence after {evaluations} evaluations: {what}")]
    NonConvergence { what: String, evaluations: usize },

    /// The sample is too small for the requested estimator.
    #[error("sample of size {n} is too small, need at least {required}")]
    SampleTooSmall { n: usize, required: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
