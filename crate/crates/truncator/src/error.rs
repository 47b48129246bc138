//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by every module.
///
/// Construction errors carry enough context to name the offending entry,
/// which the command-line frontend relays verbatim.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live on cubes of different dimension.
    #[error("dimension mismatch: {left}-bit vs {right}-bit operand")]
    DimensionMismatch { left: u8, right: u8 },

    /// A quadrant label fell outside `1..=2^N`.
    #[error("element index {index} outside 1..={size}")]
    ElementOutOfRange { index: u64, size: u64 },

    /// A sign entry was something other than +1 or -1.
    #[error("sign at position {position} must be +1 or -1, got {value}")]
    InvalidSign { position: usize, value: i8 },

    /// A size limit documented for the operation was exceeded.
    #[error("{what}: requested {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// Star powers are defined for exponents >= 1 only.
    #[error("star power exponent must be at least 1")]
    ZeroPower,

    /// A mod-2 Pascal entry was requested outside its row.
    #[error("gamma index k={k} outside 0..={max} of row p={p}", max = p.saturating_sub(1))]
    GammaIndex { k: u32, p: u32 },

    /// A map table failed validation.
    #[error("invalid map table: {reason}")]
    InvalidMap { reason: String },

    /// A verification sweep was named by an unrecognized label.
    #[error("unknown theorem '{0}'; expected one of 1, 2, 3, period, gast4")]
    UnknownTheorem(String),

    /// A measure failed validation.
    #[error("invalid measure: {reason}")]
    InvalidMeasure { reason: String },

    /// A transition matrix failed validation.
    #[error("invalid transition matrix: {reason}")]
    InvalidMatrix { reason: String },

    /// An operation needed a power-of-two group size.
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u64),

    /// Spin model parameters were rejected.
    #[error("invalid model: {reason}")]
    InvalidModel { reason: String },

    /// Finite-temperature flip probabilities do not exist at beta = inf.
    #[error("flip probability is undefined at infinite beta; use the frozen compilation")]
    InfiniteBeta,

    /// Strict frozen compilation refused tied configurations.
    #[error("frozen update ties at {n} configuration(s), first at index {first}", n = configurations.len(), first = configurations.first().copied().unwrap_or(0))]
    TiedConfigurations { configurations: Vec<u32> },

    /// A Monte Carlo routine was asked for too few trials to be meaningful.
    #[error("at least {min} trials required, got {requested}")]
    TooFewTrials { requested: u64, min: u64 },

    /// A horizon or grid parameter was empty.
    #[error("{what} must be at least 1")]
    EmptyRange { what: &'static str },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a size/feasibility limit rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
