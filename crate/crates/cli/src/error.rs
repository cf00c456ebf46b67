use ssflab_core::Error;

/// Failures mapped onto the process exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at `{field}`: {message}")]
    Parse { field: String, message: String },
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("numeric failure: {0}")]
    Numeric(Error),
    #[error("unknown experiment kind `{0}`")]
    UnknownKind(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::UnknownKind(_) => 2,
            CliError::Invalid { .. } => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        CliError::Invalid {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn missing(field: &str) -> Self {
        Self::invalid(field, "required for this experiment kind")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument { name, reason } => CliError::Invalid {
                field: name.to_string(),
                reason,
            },
            Error::DimensionMismatch { expected, actual } => CliError::Invalid {
                field: "model".to_string(),
                reason: format!("length mismatch: expected {expected}, got {actual}"),
            },
            other => CliError::Numeric(other),
        }
    }
}
