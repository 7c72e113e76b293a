use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("chirality check is ambiguous: no decomposition candidate has a strictly maximal front count")]
    ChiralityAmbiguous,

    #[error("too few correspondences: need at least {needed}, got {got}")]
    TooFewCorrespondences { needed: usize, got: usize },

    #[error("no valid hypothesis was produced by any iteration")]
    NoValidHypothesis,

    #[error("scene generation failed: {0}")]
    GenerationFailed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("missing input: {0}")]
    MissingInput(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
