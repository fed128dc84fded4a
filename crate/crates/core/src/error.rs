use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("color {color}: not a permutation of 1..={p} ({reason})")]
    NotAPermutation { color: usize, p: usize, reason: String },
    #[error("expected {expected} color maps, got {got}")]
    ColorCount { expected: usize, got: usize },
    #[error("color count must be at least 1")]
    ZeroColors,
    #[error("graph too large: p = {0} (limit 255)")]
    TooLarge(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{kind} vertex {index} out of range (p = {p})")]
    VertexOutOfRange { kind: &'static str, index: usize, p: usize },
    #[error("cut contains two edges of color {0}")]
    RepeatedCutColor(usize),
    #[error("invalid graph key: {0}")]
    InvalidKey(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("series has constant term {0}, expected 1")]
    ConstantTerm(String),
    #[error("seed graph has {vertices} vertices, truncation allows {max}")]
    TruncationTooSmall { vertices: usize, max: usize },
    #[error("non-finite value at t = {t} for {key}")]
    NonFinite { t: f64, key: String },
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
