use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("symbol {0:?} is not a letter of the alphabet")]
    UnknownLetter(char),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("enumeration bound exceeded: {required} letters requested, bound is {bound}")]
    BoundExceeded { required: usize, bound: usize },

    #[error("matrix is not a Parikh matrix over the alphabet")]
    NotAParikhMatrix,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no decomposition exists for any exponent n >= 1")]
    NoDecomposition,

    #[error("operation undefined on the empty word")]
    EmptyWord,

    #[error("words are not M-equivalent")]
    NotMEquivalent,

    #[error("words are equal")]
    EqualWords,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
