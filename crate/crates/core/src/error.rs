use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Variants are grouped so callers (the CLI in particular) can map them onto
/// exit statuses: [`Error::is_cap`] distinguishes resource caps from bad input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty Pauli string")]
    EmptyPauli,
    #[error("illegal character {ch:?} at position {position}")]
    IllegalCharacter { ch: char, position: usize },
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("empty qubit block")]
    EmptyBlock,
    #[error("invalid operator set: {0}")]
    InvalidSet(String),
    #[error("invalid partition {text:?}: {reason}")]
    InvalidPartition { text: String, reason: String },
    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("operators {0} and {1} do not anticommute")]
    NotAnticommuting(String, String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Error {
        Error::CapExceeded { what, value, cap }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
