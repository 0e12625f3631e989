use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation too small: {leakage:.3e} of the state lies beyond dim {dim} (tolerance {tolerance:.1e})")]
    TruncationTooSmall {
        dim: usize,
        leakage: f64,
        tolerance: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("projection probability {0:.3e} is too small to renormalize")]
    ProjectionImpossible(f64),

    #[error("Kraus cutoff {cutoff} leaves a completeness deficit of {deficit:.3e}")]
    KrausCutoff { cutoff: usize, deficit: f64 },

    #[error("{steps} integration steps are insufficient: half-step comparison differs by {difference:.3e}")]
    StepsTooFew { steps: usize, difference: f64 },

    #[error("unstable ratio: denominator estimate {value:.3e} is within 3 standard errors ({std_error:.3e}) of zero")]
    UnstableRatio { value: f64, std_error: f64 },

    #[error("circuit amplitude {0:.6} lies outside the unit disk")]
    AmplitudeOutOfRange(f64),

    #[error("shot budget must be positive")]
    NoShots,
}

pub type Result<T> = std::result::Result<T, Error>;
