use thiserror::Error;

/// Errors reported by validation, the solvers and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cost entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("weight {side}[{index}] must be strictly positive")]
    NonPositiveWeight { side: char, index: usize },

    #[error("total source mass {source_mass} differs from total target mass {target_mass}")]
    MassMismatch {
        source_mass: String,
        target_mass: String,
    },

    #[error("weight denominators need a common scale above the cap {cap}")]
    ScaleOverflow { cap: u64 },

    #[error("cost matrix is {rows}x{cols}, a square matrix is required")]
    NotSquare { rows: usize, cols: usize },

    #[error(
        "cost entry at ({row}, {col}) is negative; the relaxed solver requires nonnegative costs"
    )]
    NegativeCost { row: usize, col: usize },

    #[error("instance size {size} exceeds the oracle guard {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("cannot parse '{text}' as an exact rational")]
    InvalidNumber { text: String },

    #[error("tolerance must be strictly positive, got {value}")]
    InvalidTolerance { value: f64 },
}

impl Error {
    /// Stable machine-readable name, used by the CLI on standard error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFinite { .. } => "NonFinite",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::MassMismatch { .. } => "MassMismatch",
            Error::ScaleOverflow { .. } => "ScaleOverflow",
            Error::NotSquare { .. } => "NotSquare",
            Error::NegativeCost { .. } => "NegativeCost",
            Error::TooLarge { .. } => "TooLarge",
            Error::InvalidNumber { .. } => "InvalidNumber",
            Error::InvalidTolerance { .. } => "InvalidTolerance",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
