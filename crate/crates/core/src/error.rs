use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Incompatible or malformed configuration (space, truncation, rule, CLI input).
    #[error("configuration error: {0}")]
    Config(String),

    /// A point outside the domain of the space.
    #[error("domain error: {0}")]
    Domain(String),

    /// Symbol text that does not parse.
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Non-finite values, singular evaluations, failed eigensolvers.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Values too large to represent (huge degrees or weights).
    #[error("range error: {0}")]
    Range(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by user input rather than by the computation.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Parse { .. } | Error::Domain(_) | Error::Json(_)
        )
    }
}
