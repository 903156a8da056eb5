use thiserror::Error;

/// Errors raised by the exact-arithmetic pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("level {0} is too small (need l >= 2)")]
    LevelTooSmall(u64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },
    #[error("vector is not a member of the subspace")]
    NotMember,
    #[error("symbol is not cuspidal")]
    NotCuspidal,
    #[error("symbol has non-xy terms")]
    NotXyCombination,
    #[error("functional lives on {found}, expected {expected}")]
    WrongDualSpace { expected: &'static str, found: &'static str },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u64, right: u64 },
    #[error("{j} is not a unit modulo {level}")]
    NotAUnit { j: i64, level: u64 },
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
