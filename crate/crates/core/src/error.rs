use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: usize, right: usize },
    #[error("field is not divergence-free (worst relative |k·û| = {worst:.3e})")]
    NotDivergenceFree { worst: f64 },
    #[error("field has a nonzero mean mode ({magnitude:.3e})")]
    NonzeroMean { magnitude: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("non-finite value in {what} at t = {time}")]
    NonFinite { what: &'static str, time: f64 },
    #[error("metric is not positive definite at x = {x:?}")]
    NotPositiveDefinite { x: [f64; 3] },
    #[error("form degree {degree} not allowed here")]
    FormDegree { degree: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("{exploded} of {paths} paths became non-finite")]
    PathExplosion { exploded: usize, paths: usize },
    #[error("snapshot {path}: {reason}")]
    Snapshot { path: PathBuf, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
