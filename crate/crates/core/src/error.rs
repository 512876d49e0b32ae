use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet has {0} symbols; at most 256 are supported")]
    AlphabetTooLarge(usize),
    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(String),
    #[error("symbol {0:?} does not belong to the alphabet")]
    UnknownSymbol(String),
    #[error("words are over different alphabets")]
    AlphabetMismatch,
    #[error("pattern must be non-empty")]
    EmptyPattern,
    #[error("operation requires a binary alphabet, got {0} symbols")]
    NonBinary(usize),
    #[error("k must be a positive integer or \"inf\", got {0:?}")]
    InvalidK(String),
    #[error("factor space of size {m}^{k} is too large to index")]
    FactorSpaceTooLarge { m: usize, k: usize },
    #[error("slope {p}/{q} is not in the open interval (0, 1)")]
    InvalidSlope { p: i64, q: i64 },
    #[error("morphism is not prolongable on seed {0:?}")]
    NotProlongable(String),
    #[error("period of an ultimately periodic word must be non-empty")]
    EmptyPeriod,
    #[error("word of length {len} is too short: need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("flow function is not realizable by any word")]
    Unrealizable,
    #[error("swap_{index} is undefined on {word}")]
    SwapUndefined { word: String, index: usize },
    #[error("{0} is not a factor of the analyzed prefix")]
    NotAFactor(String),
    #[error("not a Sturmian factor set: {0}")]
    NotSturmian(String),
    #[error("length-2k pair ({u}, {v}) has no x·ab·rev(x) decomposition")]
    DecompositionFailure { u: String, v: String },
    #[error("invalid specification {spec:?}: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
