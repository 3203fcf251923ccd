use thiserror::Error;

/// Errors raised while reading input or manipulating proofs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("sort error: {0}")]
    Sort(String),

    #[error("arity error: {0}")]
    Arity(String),

    #[error("unknown connective `{0}`")]
    UnknownConnective(String),

    #[error("connective `{0}` is structural-only and has no formula counterpart")]
    NotOperational(String),

    #[error("invalid occurrence {0}")]
    InvalidOccurrence(String),

    #[error("signature error: {0}")]
    Signature(String),

    #[error("rule file error at line {line}: {msg}")]
    RuleFile { line: usize, msg: String },

    #[error("coordinate {coord} out of range for `{conn}` (arity {arity})")]
    Coordinate {
        conn: String,
        coord: usize,
        arity: usize,
    },

    #[error("derivation contains Cut; extraction works on cut-free derivations only")]
    CutInDerivation,

    #[error("no interpolation handler for rule `{0}`")]
    NoHandler(String),

    #[error("side condition violated for rule `{rule}`: {msg}")]
    SideCondition { rule: String, msg: String },

    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
