use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Rank correlation is undefined when one side has constant ranks.
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    /// Interaction term `((tr - te)/tr)^2` is undefined for `tr == 0`.
    #[error("interaction undefined: train-side value is zero")]
    UndefinedInteraction,

    /// Requested per-sample feature cannot be computed sample-by-sample.
    #[error("feature `{0}` is not sample-decomposable")]
    InvalidFeature(String),

    #[error("operation not supported for model kind `{0}`")]
    InvalidModelKind(String),

    /// Structurally broken input file or document.
    #[error("malformed data: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
