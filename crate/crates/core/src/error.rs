use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The regularized kernel (or covariance) matrix could not be Cholesky
    /// factorized. Signals a degenerate configuration, e.g. zero jitter with
    /// exactly duplicated noiseless points.
    #[error("matrix factorization failed: {0}")]
    FactorizationFailure(String),

    #[error("grid too small: need at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },

    /// The epistemic-value closed form diverges for zero observation noise.
    #[error("noise variance must be strictly positive")]
    NoiseVarZero,

    /// A linearization was requested outside its validity regime (e.g. the
    /// reference mean is not below the preferred value).
    #[error("sign condition violated: {0}")]
    SignConditionViolated(String),

    /// The local quadratic model has no isolated stationary point.
    #[error("degenerate quadratic model: {0}")]
    DegenerateQuadratic(String),

    #[error("x = {x} outside the objective domain [{lower}, {upper}]")]
    DomainViolation { x: f64, lower: f64, upper: f64 },

    /// A simulated state left the sane range; the parameter is outside the
    /// stable regime of the fixed-step integrator.
    #[error("numerical blowup at t = {t}: |state| = {magnitude:.3e}")]
    NumericalBlowup { t: f64, magnitude: f64 },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o failure at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
