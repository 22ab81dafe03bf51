use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("2j must be a positive integer, got {0}")]
    InvalidSpin(i64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("matrix contains a non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("eigensolver did not converge for eigenvalue {index}")]
    NonConvergence { index: usize },

    #[error("spectrum is fully degenerate below the degeneracy floor; averaging horizon undefined")]
    DegenerateSpectrum,

    #[error(
        "lowest doublet gap {gap:e} is below the degeneracy floor {floor:e}; \
         use an explicit initial-state rule (e.g. dicke-max)"
    )]
    DegenerateGroundState { gap: f64, floor: f64 },

    #[error("vectors are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("sweep grid is not uniform at index {index}")]
    NonUniformSpacing { index: usize },

    #[error("need at least {required} samples, got {found}")]
    TooFewSamples { required: usize, found: usize },

    #[error("value {value} outside the domain of `{name}`: {reason}")]
    OutOfDomain { name: &'static str, value: f64, reason: &'static str },
}
