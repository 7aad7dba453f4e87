use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A finite result could not be represented in 64-bit floating point.
    #[error("range error: {0}")]
    Range(String),

    /// Invalid lattice size, grid, or other configuration value.
    #[error("configuration error: {0}")]
    Config(String),

    /// Operands with incompatible dimensions.
    #[error("shape error: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    /// Initial data that does not satisfy the boundary constraint of a quantization case.
    #[error("consistency error: {0}")]
    Consistency(String),

    /// `sin ξ = 0`; the closed form must be replaced by its analytic limit.
    #[error(
        "degenerate spectral angle ξ = {xi}: sin ξ vanishes, use the ξ ∈ {{0, π}} limit formulas"
    )]
    Degenerate { xi: f64 },

    /// A matrix precondition (such as Hermiticity) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
