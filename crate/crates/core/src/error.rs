use thiserror::Error;

/// Errors surfaced by the beam-width library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mode parameter: {0}")]
    InvalidMode(String),

    #[error("invalid state parameter: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis is empty")]
    EmptyBasis,

    #[error("basis is not orthonormal: <{i}|{j}> = {overlap:.3e} (expected {expected})")]
    NotOrthonormal {
        i: String,
        j: String,
        overlap: f64,
        expected: f64,
    },

    #[error("vacuum has undefined relative width noise")]
    Vacuum,

    #[error("total photon number must be positive, got {0}")]
    NoPhotons(f64),

    #[error("degenerate mode: {0}")]
    Degenerate(String),

    #[error("quadrature error: {0}")]
    Quadrature(String),

    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
