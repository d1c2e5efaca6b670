use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: entries ({row}, {col}) and ({col}, {row}) differ by {deviation:e} (tolerance {tolerance:e})")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("shape {d_a}x{d_b} does not match operator dimension {dim}")]
    ShapeMismatch { d_a: usize, d_b: usize, dim: usize },

    #[error("trace is {trace}, expected 1 within {tolerance:e}")]
    InvalidTrace { trace: f64, tolerance: f64 },

    #[error("not positive semidefinite: minimum eigenvalue {min_eigenvalue:e} (tolerance {tolerance:e})")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },

    #[error("function undefined at retained eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("support inclusion violated: kernel vector of the conditioning operator leaves residual {residual:e} (tolerance {tolerance:e})")]
    SupportInconsistency { residual: f64, tolerance: f64 },

    #[error("rank deficiency: {0}")]
    Rank(String),

    #[error("degenerate shape {d_a}x{d_b}: {reason}")]
    DegenerateShape {
        d_a: usize,
        d_b: usize,
        reason: &'static str,
    },

    #[error("invalid parameter `{name}` = {value}: {bound}")]
    InvalidParameter {
        name: String,
        value: f64,
        bound: String,
    },

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
