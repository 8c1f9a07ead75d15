use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate anisotropy: {0}")]
    DegenerateAnisotropy(String),
    #[error("invalid eta: {0}")]
    InvalidEta(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("empty clip: {0}")]
    EmptyClip(String),
    #[error("polygon generator failed after {attempts} attempts")]
    GeneratorFailure { attempts: usize },
    #[error("beta = {beta} is in the {actual} regime; this operation requires {required}")]
    Regime {
        beta: f64,
        actual: String,
        required: String,
    },
    #[error("optimization failed: {0}")]
    OptimizationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
