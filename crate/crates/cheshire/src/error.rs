//! Error type shared by all simulation and analysis layers.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transmission must lie in [0, 1], got {0}")]
    TransmissionOutOfRange(f64),

    #[error("state norm squared must lie in [0, 1], got {0}")]
    StateNormOutOfRange(f64),

    #[error("state must be normalized, got norm squared {0}")]
    StateNotNormalized(f64),

    #[error("matrix is not Hermitian (largest asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("pre/postselection pair is degenerate: overlap magnitude {overlap:.3e}")]
    DegeneratePostselection { overlap: f64 },

    #[error("imperfection angle {0} rad is outside the small-imperfection regime")]
    ImperfectionAngleTooLarge(f64),

    #[error("fringe visibility undefined: zero mean detection probability")]
    UndefinedVisibility,

    #[error("refractive index must exceed 1, got {0}")]
    InvalidRefractiveIndex(f64),

    #[error("incidence angle must lie in [0, \u{3c0}/2), got {0} rad")]
    InvalidIncidenceAngle(f64),

    #[error("total internal reflection at incidence angle {incidence_rad} rad")]
    TotalInternalReflection { incidence_rad: f64 },

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("fringe fit needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("fringe fit needs phases spanning a full period, got span {span_rad:.4} rad")]
    InsufficientPhaseSpan { span_rad: f64 },

    #[error("degenerate fringe fit: {0}")]
    DegenerateFit(String),

    #[error("visibility inversion has no real solution (discriminant {discriminant:.3e})")]
    NoQuadraticSolution { discriminant: f64 },

    #[error("reflectivity must be positive to infer a presence weak value")]
    ZeroReflectivity,

    #[error("rotation angle must be nonzero to infer a polarization weak value")]
    ZeroRotationAngle,
}
