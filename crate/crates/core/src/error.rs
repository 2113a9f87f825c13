use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{location}: malformed rational {text:?}")]
    MalformedRational { location: String, text: String },

    #[error("{location}: {message}")]
    Schema { location: String, message: String },

    #[error("{location}: unknown state {name:?}")]
    UnknownState { location: String, name: String },

    #[error("{location}: unknown letter {name:?}")]
    UnknownLetter { location: String, name: String },

    #[error("{location}: duplicate name {name:?}")]
    DuplicateName { location: String, name: String },

    #[error("{location}: transitions of state {state:?} on letter {letter:?} sum to {sum}, expected {expected}")]
    NotStochastic {
        location: String,
        state: String,
        letter: String,
        sum: String,
        expected: &'static str,
    },

    #[error("{location}: probability {value} outside [0,1]")]
    OutOfUnitInterval { location: String, value: String },

    #[error("{location}: negative weight {value} in a conic automaton")]
    NegativeWeight { location: String, value: String },

    #[error("cannot parse word {text:?}: {reason}")]
    BadWord { text: String, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{operation} does not support the {theory} theory")]
    UnsupportedTheory {
        operation: &'static str,
        theory: &'static str,
    },

    #[error("alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("state vector violates the {theory} theory: {reason}")]
    IllegalStateVector {
        theory: &'static str,
        reason: String,
    },

    /// An invariant that the theory guarantees was found broken.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            location: location.into(),
            message: message.into(),
        }
    }
}
