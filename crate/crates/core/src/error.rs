use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument lies at a pole of the Gamma function.
    #[error("pole of the Gamma function at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    /// Argument outside the domain an operation supports.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation precondition (including theorem hypothesis ranges) not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A multiplier returned a non-finite value at a lattice node.
    #[error("multiplier evaluation failed at |xi| = {xi}: {reason}")]
    MultiplierEvaluation { xi: f64, reason: String },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-parsable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Pole { .. } | Error::Domain(_) => "domain",
            Error::Precondition(_) => "precondition",
            Error::InvalidGrid(_) | Error::GridMismatch(_) => "grid",
            Error::MultiplierEvaluation { .. } => "multiplier",
            Error::Instability(_) => "instability",
            Error::Format(_) | Error::Json(_) => "format",
            Error::Io(_) | Error::Csv(_) => "io",
        }
    }
}
