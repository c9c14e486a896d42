use thiserror::Error;

use crate::sweep::SweepFailure;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller-supplied parameters are out of range or mutually inconsistent.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Input data is malformed or unusable.
    #[error("data error: {0}")]
    Data(String),

    /// A point index or point set does not belong to the instance.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("query budget exhausted: {issued} of {budget} one-versus-all queries already issued")]
    BudgetExhausted { issued: u64, budget: u64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(
        "no threshold candidate clustered at least {} points (best: {})",
        .0.required,
        .0.best_coverage
    )]
    SweepFailed(Box<SweepFailure>),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
