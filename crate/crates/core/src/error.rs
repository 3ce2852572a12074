use thiserror::Error;

use crate::model::{EdgePartition, Face};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The face flip did not have exactly one partner. This falsifies the
    /// uniqueness statement of the flip lemma and must never be papered over.
    #[error(
        "flip lemma violated on face {face}: {survivors} candidate partner(s) for partition {partition}"
    )]
    LemmaViolation {
        partition: EdgePartition,
        face: Face,
        survivors: usize,
    },

    #[error("exhaustive enumeration for d = {d} refused: {reason}")]
    Infeasible { d: usize, reason: String },

    #[error("certificate failed: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code: 1 for a failed mathematical certificate, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LemmaViolation { .. } | Error::Certificate(_) => 1,
            _ => 2,
        }
    }
}
