use thiserror::Error;

/// Errors surfaced by the toolkit's fallible operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("measurement direction must have unit norm, got |n| = {norm}")]
    NonUnitDirection { norm: f64 },

    #[error("eta must lie in [0, 1], got {0}")]
    EtaOutOfRange(f64),

    #[error("state parameters outside the positivity region (minimum eigenvalue {min_eigenvalue})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("unsupported setting count {0}; supported counts are 2, 3, 4, 6, 10")]
    UnsupportedSettings(usize),

    #[error("matrix is not Hermitian (defect {defect})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (defect {defect})")]
    NotUnitary { defect: f64 },

    #[error("strategy has {strategy} rules but the family carries {gates} gates")]
    StrategyGateMismatch { strategy: usize, gates: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
