use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} {index} out of range (valid: {valid})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        valid: String,
    },

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("not a PA-peelable graph: {0}")]
    NotPeelable(String),

    #[error("sequence length {len} is not divisible by block size {block}")]
    UnequalBlocks { len: usize, block: usize },

    #[error("{what} too large: {value} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("bad magic bytes")]
    BadMagic,

    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error("truncated input: needed {needed} more bytes at offset {offset}")]
    Truncated { offset: usize, needed: usize },

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("corrupt data: {0}")]
    Corrupt(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, index: usize, valid: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            index,
            valid: valid.into(),
        }
    }
}
