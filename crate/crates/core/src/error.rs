use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by the counting pipeline.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not hermitian: entry ({row},{col}) is not the conjugate of ({col},{row})")]
    NotHermitian { row: usize, col: usize },

    #[error("diagonal entry ({index},{index}) must be a positive rational integer")]
    BadDiagonal { index: usize },

    #[error("form is not positive definite: pivot {index} of the exact Cholesky is non-positive")]
    NotPositiveDefinite { index: usize },

    #[error("unsupported domain for this operation: {0}")]
    UnsupportedDomain(String),

    #[error("budget exceeded in {what}: predicted {predicted} elements, budget {budget}")]
    BudgetExceeded {
        what: String,
        predicted: u128,
        budget: u64,
    },

    #[error("local density at p = {p} did not stabilize by j_max = {j_max}")]
    NotStabilized { p: u64, j_max: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(String),
}
