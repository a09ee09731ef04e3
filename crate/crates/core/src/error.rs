use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or argument is outside its admissible domain.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: String,
        value: f64,
        reason: String,
    },

    /// Malformed or unreadable input data.
    #[error("input error: {0}")]
    Input(String),

    /// The integrand (or an evaluator) produced a non-finite value.
    #[error("non-finite evaluation at x = {x}")]
    Evaluation { x: f64 },

    /// An improper integral failed to settle, e.g. an infinite moment.
    #[error("integral diverges: {0}")]
    Divergence(String),

    /// Adaptive integration ran out of subdivisions.
    #[error("quadrature did not converge ({context}): error estimate {error_estimate:e} for value {value:e}")]
    NonConvergence {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    /// The model lacks something the operation needs (e.g. a density).
    #[error("capability missing: {0}")]
    Capability(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A ratio denominator fell below the representable range.
    #[error("underflow in {quantity} at x = {x}")]
    Underflow { quantity: String, x: f64 },
}

impl Error {
    pub(crate) fn domain(name: &str, value: f64, reason: &str) -> Self {
        Error::Domain {
            name: name.to_string(),
            value,
            reason: reason.to_string(),
        }
    }
}
