use thiserror::Error;

/// Errors produced by the precoding library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular system: Cholesky pivot {pivot:e} at index {index} is below {threshold:e}")]
    SingularSystem {
        index: usize,
        pivot: f64,
        threshold: f64,
    },

    #[error("FFT length {0} is not a power of two")]
    FftSize(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot normalize a zero precoding matrix")]
    ZeroPrecoder,

    #[error("could not place {users} UEs with {min_separation_deg} deg separation after {attempts} attempts")]
    PlacementFailed {
        users: usize,
        min_separation_deg: f64,
        attempts: usize,
    },

    #[error("degenerate pilot observation with magnitude {magnitude:e}")]
    DegeneratePilot { magnitude: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
