use thiserror::Error;

use crate::context::Context;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet size {0} (must be between 1 and 256)")]
    InvalidAlphabet(usize),

    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: u8, size: usize },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty context is not allowed here")]
    EmptyContext,

    #[error("invalid height {height} for a sample of length {n}")]
    InvalidHeight { height: usize, n: usize },

    #[error("contexts of length {depth} over {size} symbols do not fit in a 64-bit key")]
    TooDeep { depth: usize, size: usize },

    #[error("no context of the tree is a suffix of the past ...{0}")]
    NoContext(Context),

    #[error("no context qualifies as a renewal point")]
    NoRenewalPoint,

    #[error("renewal string {context} occurs {count} times; at least 2 are needed")]
    TooFewRenewals { context: Context, count: usize },

    #[error("no emitter for context {0}")]
    MissingEmitter(Context),

    #[error("functional chunks have different lengths: {expected} vs {found}")]
    ChunkLength { expected: usize, found: usize },

    #[error("transition table has {rows} rows but the tree has {contexts} contexts")]
    MisalignedTable { rows: usize, contexts: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("criterion {criterion} needs {expected} responses")]
    ResponseKind {
        criterion: &'static str,
        expected: &'static str,
    },

    #[error("champion chain out of order: {0}")]
    ChainOrder(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
