use thiserror::Error;

use crate::record::MoveOrder;

/// Errors raised by the game, its estimators, and the trace codecs.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {0} is outside [0, 1]")]
    Domain(f64),

    #[error("grid resolution must be between 2 and 65536, got {0}")]
    Resolution(u32),

    #[error("grid index {index} out of range for resolution {resolution}")]
    GridIndex { index: u32, resolution: u32 },

    #[error("probability {0} is not a value of the configured grid")]
    OffGrid(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("move-order contract violated by {who} under {order:?}: {detail}")]
    Contract {
        who: &'static str,
        order: MoveOrder,
        detail: &'static str,
    },

    #[error("round {t}: selection flag disagrees with forecast == alpha")]
    InconsistentSelection { t: u32 },

    #[error("empty test set: the selection criterion never fired")]
    EmptyTestSet,

    #[error("empty test set in replication {replication}")]
    EmptyTestSetIn { replication: u32 },

    #[error("insufficient data: need {needed} selected rounds, have {have}")]
    InsufficientData { needed: u64, have: u64 },

    #[error("round {t} is out of range for a trace of {len} rounds")]
    RoundOutOfRange { t: u32, len: usize },

    #[error("empty population")]
    EmptyPopulation,

    #[error("data integrity: {0}")]
    Integrity(String),

    #[error("trace format: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
