//! Error type shared across the crate.

use crate::ring::Domain;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("ring element is in the {found:?} domain, expected {expected:?}")]
    WrongDomain { expected: Domain, found: Domain },

    #[error("ring parameters differ: (N={n_left}, q={q_left}) vs (N={n_right}, q={q_right})")]
    ParamMismatch {
        n_left: usize,
        q_left: u64,
        n_right: usize,
        q_right: u64,
    },

    #[error("scale mismatch: {left} vs {right}")]
    ScaleMismatch { left: f64, right: f64 },

    #[error("depth mismatch: {left} vs {right}")]
    DepthMismatch { left: u8, right: u8 },

    #[error("multiplicative depth exhausted: ciphertext is already a product")]
    DepthExhausted,

    #[error("slot magnitude {value} exceeds the configured budget {budget}")]
    MagnitudeOverflow { value: f64, budget: f64 },

    #[error("non-finite slot value at position {0}")]
    NonFinite(usize),

    #[error("slot vector length {got} exceeds capacity {max}")]
    TooManySlots { got: usize, max: usize },

    #[error("base slot {index} is zero; every cached slot must be nonzero")]
    ZeroBaseSlot { index: usize },

    #[error("batch size {got} out of range 1..={max}")]
    BatchSizeOutOfRange { got: usize, max: usize },

    #[error("value {value} not representable with {int_bits} integer / {frac_bits} fraction bits")]
    RadixRange {
        value: f64,
        int_bits: u32,
        frac_bits: u32,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("corrupt file: {0}")]
    CorruptFile(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
