use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    ZeroArgument,

    #[error("{0}")]
    InvalidArgument(String),

    #[error("n = {n} exceeds the enumeration bound {bound}")]
    AboveBound { n: usize, bound: usize },

    #[error("invalid bridge: {0}")]
    InvalidBridge(String),

    #[error("invalid score sequence: {0}")]
    InvalidScoreSequence(String),

    #[error("bridge does not correspond to a score sequence")]
    NotScoreBridge,

    #[error("leading element must be {expected}, got {found}")]
    LeadingElement { expected: i32, found: String },

    #[error("entry {index} is not positive ({value})")]
    NonPositiveEntry { index: usize, value: String },

    #[error("shift {m} out of range 0..{limit}")]
    ShiftOutOfRange { m: usize, limit: usize },

    #[error("bridge area {area} is not divisible by n = {n}")]
    NotInCodomain { area: i64, n: usize },

    #[error("bijection violated: bridge {bridge} has {count} preimages")]
    PreimageCount { bridge: String, count: usize },

    #[error("truncation {requested} exceeds available prefix length {available}")]
    TruncationTooLarge { requested: usize, available: usize },

    #[error("regular-variation index must be negative, got {0}")]
    NonNegativeIndex(String),

    /// An exactness guarantee failed. This indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
