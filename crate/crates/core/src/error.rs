use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument out of domain: {what} = {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no convergence after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("q mismatch between fits: {p} vs {r}")]
    QMismatch { p: f64, r: f64 },

    #[error("insufficient overlap between series: {common} common dates")]
    InsufficientOverlap { common: usize },

    #[error("probability vector not normalized: sum = {sum}")]
    NotNormalized { sum: f64 },

    #[error("support violation at index {index}: p > 0 where r = 0")]
    SupportViolation { index: usize },

    #[error("degenerate risk-return profile: {0}")]
    DegenerateProfile(&'static str),

    #[error("data span too short: {0}")]
    InsufficientSpan(String),

    #[error("empty universe at cycle starting {0}")]
    EmptyUniverse(chrono::NaiveDate),

    #[error("too few securities to bin: need {needed}, got {got}")]
    TooFewSecurities { needed: usize, got: usize },

    #[error("invalid bin edges: {0}")]
    InvalidEdges(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
