use thiserror::Error;

/// Errors produced by the game machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mean absolute deviation closed form needs an even horizon >= 2, got {0}")]
    OddHorizon(u32),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("function value is not finite at support point {point}")]
    NonFinite { point: f64 },

    #[error("round {t} is past the horizon {horizon}")]
    RoundPastHorizon { t: u32, horizon: u32 },

    #[error("replay sequence exhausted after {0} gradients")]
    ReplayExhausted(usize),

    #[error("gradient {0} lies outside [-1, 1]")]
    GradientOutOfRange(f64),

    #[error("evaluation grid is empty")]
    EmptyGrid,

    #[error("grid too coarse: minimum attained at x-range endpoint {endpoint} (round {round}, sum {sum})")]
    GridNotBracketing { endpoint: f64, round: u32, sum: f64 },

    #[error("transcript incomplete: {rounds} of {horizon} rounds recorded")]
    IncompleteTranscript { rounds: usize, horizon: u32 },

    #[error("horizon {horizon} exceeds the cap {cap} for this computation")]
    HorizonTooLarge { horizon: u32, cap: u32 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
