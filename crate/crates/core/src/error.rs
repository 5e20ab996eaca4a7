//! Crate-wide error type.

use thiserror::Error;

use crate::Natural;

/// Which side of the sandwich bound failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundSide {
    Lower,
    Upper,
}

impl std::fmt::Display for BoundSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundSide::Lower => write!(f, "lower"),
            BoundSide::Upper => write!(f, "upper"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sieve limit {limit} exceeds the native range 2^32")]
    LimitTooLarge { limit: u64 },

    #[error("exponent {exponent} exceeds the pow_fixed ceiling 3^40")]
    ExponentTooLarge { exponent: Natural },

    #[error("invalid exponent c = {c}: require c >= 3, or c = 2 with allow_c2")]
    InvalidExponent { c: u32 },

    #[error("seed {seed} is not prime")]
    SeedNotPrime { seed: Natural },

    #[error("sandwich bound violated at index {index} ({side} side)")]
    BoundViolation { index: usize, side: BoundSide },

    #[error("invalid range [{n_min}, {n_max}]: require 2 <= n_min <= n_max")]
    InvalidRange { n_min: u64, n_max: u64 },

    #[error("sequence is empty")]
    EmptySequence,

    #[error("sequence mismatch: expected {expected}, found {found}")]
    VariantMismatch { expected: String, found: String },

    #[error("interval bounds differ already in the integer part")]
    NoCommonPrefix,

    #[error("precision insufficient at index {index}: directed powers straddle an integer")]
    PrecisionInsufficient { index: usize },

    #[error("cache rejected: {0}")]
    CacheInvalid(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
