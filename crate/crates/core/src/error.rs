use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A closed form produced a value that cannot be right (wrong sign,
    /// non-finite, residual imaginary part).
    #[error("internal consistency check failed in {quantity}: {detail}")]
    InternalConsistency { quantity: &'static str, detail: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// The quantity is mathematically undefined for these parameters.
    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("quadrature did not converge after {refinements} refinements (last estimates {previous} and {last})")]
    Convergence {
        refinements: usize,
        previous: f64,
        last: f64,
    },

    #[error("Fock cutoff {cutoff} too small: tail weight {tail:e} exceeds tolerance")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("master-equation integration failed: {0}")]
    Integration(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn consistency(quantity: &'static str, detail: impl Into<String>) -> Self {
        Error::InternalConsistency {
            quantity,
            detail: detail.into(),
        }
    }
}
