use thiserror::Error;

/// Errors produced by the ranking library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} index {index} out of range (size {size})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    /// Input lacks the chain property; carries a pair of incomparable rows (0-based).
    #[error("tournament does not have the chain property: rows {0} and {1} are incomparable")]
    NotChain(usize, usize),

    #[error("{what} is {requested}, above the limit of {limit}; {hint}")]
    ResourceCap {
        what: &'static str,
        requested: usize,
        limit: usize,
        hint: &'static str,
    },

    #[error("weighted minimum is not unique: {0} chain tournaments tie")]
    Ambiguous(usize),

    #[error("selection function '{name}' violated '{clause}' in round {round}")]
    Contract {
        name: String,
        clause: &'static str,
        round: usize,
    },

    #[error("rankings are not chain-definable: {a_ranks} ranks on A vs {b_ranks} ranks on B")]
    NotChainDefinable { a_ranks: usize, b_ranks: usize },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
