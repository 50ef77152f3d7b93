use thiserror::Error;

/// Errors returned by this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("shape mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("policy needs an initial forecast before the first observation")]
    NeedsInitialForecast,

    #[error("degenerate Kalman gain: predicted observation variance is zero")]
    DegenerateGain,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid config at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("problem too large: {size} profiles exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u128 },

    #[error("no fixed point found on [{lo}, {hi}]")]
    NoFixedPoint { lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
