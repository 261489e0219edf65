use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all solver and diagnostic operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A profile that must be strictly positive has a node at or below zero.
    /// Carries the flow time when positivity was lost mid-run.
    #[error("profile is not strictly positive{}", .time.map(|t| format!(" (at t = {t})")).unwrap_or_default())]
    NonPositive { time: Option<f64> },

    /// The closure integrals of the profile exceed the closing tolerance,
    /// so no embedded closed curve has this curvature function.
    #[error("profile does not close: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NonClosable { residual: f64, tolerance: f64 },

    /// Two consecutive curve points coincide.
    #[error("degenerate segment: repeated point at index {index}")]
    DegenerateSegment { index: usize },

    /// Ancient-frame constructors require t < 0.
    #[error("time {time} is not ancient (t < 0 required)")]
    NonAncientTime { time: f64 },

    /// The stability restriction pushed the step below the configured floor.
    #[error("step size underflow at t = {time}: dt = {dt:e} < dt_min = {dt_min:e}")]
    StepSizeUnderflow { time: f64, dt: f64, dt_min: f64 },

    /// The embeddedness sweep found crossing segments mid-run; the flow
    /// preserves embeddedness, so this signals a discretization fault.
    #[error("curve self-intersects at t = {time} (segments {first} and {second})")]
    SelfIntersection {
        time: f64,
        first: usize,
        second: usize,
    },

    /// Every sample sits inside the tolerance band; a zero count is undefined.
    #[error("all samples lie within the tolerance band; zero count undefined")]
    AllZero,

    #[error("trajectory holds no states")]
    EmptyTrajectory,

    /// Interval endpoint values are too large for a vanishing-boundary check.
    #[error("boundary value {value:e} exceeds tolerance {tolerance:e}")]
    BadBoundary { value: f64, tolerance: f64 },

    /// The interval is longer than the inequality admits.
    #[error("interval length {length} exceeds the admissible {max_length}")]
    BadInterval { length: f64, max_length: f64 },

    /// Log-linear fitting needs strictly positive series values.
    #[error("series values must be strictly positive for exponential fitting")]
    NonPositiveValues,

    #[error("grid with n = {n} cannot resolve mode {mode} (need n >= 2*mode + 2)")]
    GridTooCoarse { n: usize, mode: usize },

    /// An operation restricted to one flow frame received the other.
    #[error("trajectory is in the wrong frame for this operation")]
    WrongFrame,

    #[error("need at least {required} snapshots at distinct times, got {count}")]
    TooFewSnapshots { count: usize, required: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn non_positive() -> Self {
        Error::NonPositive { time: None }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
