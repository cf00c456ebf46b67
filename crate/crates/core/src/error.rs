use thiserror::Error;

/// Errors raised by model assembly, spectral calculus and the verifiers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its admissible range.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix dimension {size} exceeds the dense cap {cap}")]
    DenseCapExceeded { size: usize, cap: usize },

    /// Assembled operator failed the exact Hermitian check.
    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("function fails the required monotonicity near {at}")]
    NotMonotone { at: f64 },

    #[error("function evaluates to a non-finite value at {at}")]
    NonFinite { at: f64 },

    #[error("need at least {required} points above the floor, found {found}")]
    TooFewPoints { required: usize, found: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
