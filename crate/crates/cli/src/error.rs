use std::fmt;

use rigidity_core::CoreError;

/// Failure classes, each owning one exit code: 2 for input that cannot be
/// read as JSON, 3 for input that parses but violates the schema or a value
/// constraint, 4 for a model kind a command cannot operate on, 5 for a
/// certificate that fails re-verification.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
    Unsupported(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse(_) => 2,
            Self::Validation(_) => 3,
            Self::Unsupported(_) => 4,
            Self::Verification(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Self::Parse(m) | Self::Validation(m) | Self::Unsupported(m) | Self::Verification(m) => {
                m
            }
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse(m) => write!(f, "parse error: {m}"),
            Self::Validation(m) => write!(f, "validation error: {m}"),
            Self::Unsupported(m) => write!(f, "unsupported kind: {m}"),
            Self::Verification(m) => write!(f, "verification failure: {m}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match &e {
            CoreError::UnsupportedKind { .. } => Self::Unsupported(e.to_string()),
            CoreError::VerificationFailed { .. } => Self::Verification(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}
