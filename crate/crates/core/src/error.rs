use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("rank deficient {what}: rank {rank}, singular values {singular_values:?}")]
    RankDeficient {
        what: String,
        rank: usize,
        singular_values: Vec<f64>,
    },

    #[error("singular {what}: condition number estimate {condition:e}")]
    Singular { what: String, condition: f64 },

    #[error("identification failure: {0}")]
    IdentificationFailure(String),

    #[error("commanded input is not viable: {}", diagnostics.join("; "))]
    Unviable { diagnostics: Vec<String> },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
