use alloc::string::String;

use thiserror::Error;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    Degree { expected: usize, found: usize },

    #[error("incompatible scalar rings: {0}")]
    RingMismatch(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not a Lie algebra: d(d e^{generator}) = {residue}")]
    NotLieAlgebra { generator: usize, residue: String },

    #[error("singular metric")]
    SingularMetric,

    #[error("singular matrix")]
    SingularMatrix,

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("3-form is not stable (det b = 0)")]
    Unstable,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("dimension {0} is out of range (1..=31)")]
    DimensionRange(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
