use thiserror::Error;

pub type Result<T> = std::result::Result<T, OwaError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OwaError {
    #[error("dimension mismatch: expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The metric divides by `n - 1` or `ln n` and has no value for this length.
    #[error("metric undefined for n = {0} (requires n >= 2)")]
    DegenerateDimension(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    /// The parent normal has negligible mass on `[0, 1]`.
    #[error("normalization underflow for mu = {mu}, sigma = {sigma}")]
    Underflow { mu: f64, sigma: f64 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error(
        "infeasible decision point (alpha = {alpha}, delta = {delta}): \
         max trade-off is 4*alpha*(1-alpha) = {delta_max}, best distance {distance:e}"
    )]
    Infeasible {
        alpha: f64,
        delta: f64,
        delta_max: f64,
        distance: f64,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("i/o error: {0}")]
    Io(String),
}
