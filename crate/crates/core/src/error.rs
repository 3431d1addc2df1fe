use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which half of a product frame or bipartite system an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// First-round inputs, or the left tensor factor.
    X,
    /// Second-round inputs, or the right tensor factor.
    Y,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::X => f.write_str("X"),
            Side::Y => f.write_str("Y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: dimension mismatch, expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{context}: expected a square matrix, found {rows}x{cols}")]
    NotSquare {
        context: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("{context}: count mismatch, expected {expected}, found {found}")]
    CountMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{context}: entries must be finite")]
    NonFinite { context: &'static str },
    #[error("{context}: hermiticity violated, max |M - M^dagger| = {residual:e}")]
    NotHermitian { context: &'static str, residual: f64 },
    #[error("{context}: positivity violated, minimum eigenvalue = {min_eigenvalue:e}")]
    NotPositive {
        context: &'static str,
        min_eigenvalue: f64,
    },
    #[error("{context}: unit trace violated, trace = {trace}")]
    TraceNotOne { context: &'static str, trace: f64 },
    #[error("{context}: trace preservation violated, max |sum K^dagger K - 1| = {residual:e}")]
    NotTracePreserving { context: &'static str, residual: f64 },
    #[error("{context}: completeness violated, max |sum E - 1| = {residual:e}")]
    Incomplete { context: &'static str, residual: f64 },
    #[error("{context}: marginal violated, max |Tr_B J - 1/dA| = {residual:e}")]
    BadMarginal { context: &'static str, residual: f64 },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("{context}: {what} must not be empty")]
    Empty {
        context: &'static str,
        what: &'static str,
    },
    #[error("input family {side} is not tomographically complete: frame rank {rank} < {required}")]
    RankDeficient {
        side: Side,
        rank: usize,
        required: usize,
    },
    #[error("data inconsistent with linear model: residual {residual:e} exceeds {tolerance:e}")]
    InconsistentData { residual: f64, tolerance: f64 },
    #[error("Choi operator is PPT (minimum partial-transpose eigenvalue {min_eigenvalue:e}); no witness can be built from it")]
    NoWitness { min_eigenvalue: f64 },
    #[error("{count} instrument branches exceed the limit of {limit}")]
    TooManyBranches { count: usize, limit: usize },
    #[error("{context}: outcome labels do not match")]
    LabelMismatch { context: &'static str },
    #[error("{context}: {message}")]
    Format {
        context: &'static str,
        message: String,
    },
}
