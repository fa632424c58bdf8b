use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty carrier")]
    EmptyCarrier,
    #[error("duplicate element name `{0}`")]
    DuplicateElement(String),
    #[error("duplicate rank label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("algebra has no operations")]
    EmptyOperations,
    #[error("partial table for `{symbol}`: expected {expected} rows, found {found}")]
    PartialTable {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("value outside carrier in `{symbol}`: {value}")]
    ValueOutsideCarrier { symbol: String, value: String },
    #[error("unknown element `{name}` in {context}")]
    UnknownElement { context: String, name: String },
    #[error("duplicate row in table of `{symbol}`")]
    DuplicateRow { symbol: String },
    #[error("row of `{symbol}` has {found} arguments, rank has {expected}")]
    RowArity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("rank mismatch: expected {expected} arguments, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("indexing values have inconsistent inner ranks")]
    InconsistentInnerRank,
    #[error("empty indexing: inner rank must be supplied explicitly")]
    MissingInnerRank,
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("`{0}` has rule-based operations and cannot be enumerated exhaustively")]
    RuleBased(String),
    #[error("size guard exceeded for {what}: needs {needed}, limit {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: String,
        limit: String,
    },
    #[error("frame is not a basis: {0}")]
    NotABasis(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("project contains a cycle through `{0}`")]
    Cycle(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn guard(what: &'static str, needed: impl ToString, limit: impl ToString) -> Self {
        Error::GuardExceeded {
            what,
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }
}
