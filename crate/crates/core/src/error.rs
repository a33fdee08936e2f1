use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |M - M^dagger| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (max |U^dagger U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator breaks reflection symmetry (max |[M, R]| = {commutator:.3e})")]
    SymmetryBroken { commutator: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient data: need {needed}, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}
