use thiserror::Error;

/// Errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A named column, attribute, or key is missing or invalid.
    #[error("schema error: {0}")]
    Schema(String),

    /// A single input row could not be interpreted.
    #[error("row error at line {line}: {msg}")]
    Row { line: u64, msg: String },

    /// The input contains no usable records.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Malformed XML in an XES stream.
    #[error("xml parse error at byte offset {offset}: {msg}")]
    Xml { offset: u64, msg: String },

    /// A symbol code fell outside a mapping's domain.
    #[error("mapping domain error: symbol code {0} is not covered by the mapping")]
    MappingDomain(u32),

    /// An operation parameter is out of its valid range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Two values that must describe the same data do not.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// Numerically or structurally degenerate input.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A referenced trace id does not exist.
    #[error("lookup error: {0}")]
    Lookup(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
