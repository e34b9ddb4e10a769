use thiserror::Error;

/// Errors raised across placement, partitioning, delivery and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("K = {faps} exceeds the enumeration limit of {limit} F-APs")]
    TooLarge { faps: usize, limit: usize },

    /// Internal assertion: an F-AP still had undelivered subfiles after its deadline slot.
    #[error("deadline violated: F-AP {fap} has {pending} undelivered subfiles after slot {slot}")]
    DeadlineViolation {
        fap: usize,
        slot: usize,
        pending: usize,
    },

    /// Internal assertion: a requested file could not be reassembled.
    #[error("F-AP {fap} cannot decode file {file}: {missing} bits unresolved")]
    DecodeFailure {
        fap: usize,
        file: usize,
        missing: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
