use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants map onto the CLI exit codes: validation problems exit with 2,
/// numerical failures with 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("numerical failure in {module} at s = {s}: {detail}")]
    Numeric {
        module: &'static str,
        s: f64,
        detail: String,
    },

    #[error("accuracy bound violated: {0}")]
    Accuracy(String),

    #[error("landscape: {0}")]
    Landscape(String),

    #[error("unsupported problem: {0}")]
    Unsupported(String),

    #[error("curve shape: {0}")]
    Shape(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numeric(module: &'static str, s: f64, detail: impl Into<String>) -> Self {
        Error::Numeric {
            module,
            s,
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_) | Error::Range(_) | Error::Capability(_) | Error::Unsupported(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
