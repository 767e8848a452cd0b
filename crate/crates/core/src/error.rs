use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field order {p}^{e} exceeds the supported bound 2^31")]
    FieldTooLarge { p: u64, e: u32 },

    #[error("operands belong to different fields (q = {left} and q = {right})")]
    FieldMismatch { left: u32, right: u32 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("element {value} is not in F_{q}")]
    ElementOutOfRange { value: u64, q: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration guard exceeded: {what} needs {needed} items, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        needed: String,
        limit: u64,
    },

    #[error("chain guarantee not met: best chain has length {found}, guarantee is {guarantee}")]
    GuaranteeNotMet { found: usize, guarantee: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by size limits or the environment rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded { .. }
                | Error::FieldTooLarge { .. }
                | Error::Io(_)
                | Error::Csv(_)
                | Error::GuaranteeNotMet { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
