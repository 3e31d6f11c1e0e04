use thiserror::Error;

/// Errors raised by the geometry, mass and construction routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("evaluation point {x} outside grid range [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("invalid warp: {0}")]
    InvalidWarp(String),

    #[error("gluing rejected: {0}")]
    Gluing(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("region is not allowable: {0}")]
    NotAllowable(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("amplitude too large: {0}")]
    Amplitude(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("collar error: {0}")]
    Collar(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors that describe a violated precondition or an infeasible
    /// request, as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Stage { source, .. } => source.is_precondition(),
            Error::InvalidProfile(_) | Error::Config(_) => false,
            _ => true,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
