use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A word, rational or ordinal literal failed to parse.
    #[error("malformed literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("prefix too short: need {needed} symbols, have {available}")]
    PrefixTooShort { needed: usize, available: usize },

    #[error("insufficient depth: need level {needed}, table reaches {available}")]
    InsufficientDepth { needed: usize, available: usize },

    #[error("relation is reflexive at {0}")]
    ReflexiveInput(String),

    #[error("{0} is not a limit ordinal")]
    NotLimit(String),

    #[error("integer tuples must be nonempty")]
    EmptyTuple,

    #[error("invalid depth {0}")]
    InvalidDepth(usize),

    #[error("invalid test table: {0}")]
    InvalidTable(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),
}

impl Error {
    pub(crate) fn parse(literal: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            literal: literal.to_owned(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
