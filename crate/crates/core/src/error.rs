use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors produced by the contour toolkit.
///
/// The variants are coarse on purpose: the CLI maps each class onto an exit
/// code (argument 2, data 3, numeric 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid contour: {0}")]
    InvalidContour(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("coefficients belong to basis {found}, expected {expected}")]
    BasisMismatch { expected: String, found: String },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Broad error class, used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Argument,
    Data,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Argument(_) | Error::BasisMismatch { .. } => ErrorClass::Argument,
            Error::Numeric(_) => ErrorClass::Numeric,
            Error::InvalidContour(_)
            | Error::Format(_)
            | Error::Corpus(_)
            | Error::Parse { .. }
            | Error::UnsupportedVersion(_)
            | Error::Io(_)
            | Error::Json(_) => ErrorClass::Data,
        }
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn contour(msg: impl Into<String>) -> Self {
        Error::InvalidContour(msg.into())
    }
}
