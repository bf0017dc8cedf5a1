use thiserror::Error;

/// Errors raised by the library. Each variant names the failing condition;
/// the message carries the operation context.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{op}: no convergence ({detail})")]
    NonConvergence { op: &'static str, detail: String },

    #[error("kronecker_classify: power iteration did not stabilise up to m = {bound}")]
    PrecisionExceeded { bound: usize },

    #[error("enumerate_naive: estimated {estimated} nodes exceeds budget {budget}")]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("coincident support points at index {0} and {1}")]
    CoincidentPoints(usize, usize),

    #[error("measure support is not real")]
    UnsupportedSupport,

    #[error("green_segment: point lies on the segment")]
    DomainError,

    #[error("integerization degree {degree} exceeds cap {cap}")]
    SizeExceeded { degree: u128, cap: usize },

    #[error("lemniscate certificate failed: {0}")]
    CertificationFailed(String),

    #[error("critical value of P within {0:e} of M (double root of D)")]
    DegenerateCriticalValue(f64),

    #[error("linear system ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("no sign assignment reproduces pi (closest residual {0:e})")]
    SignSearchFailed(f64),

    #[error("root count {value} is not integral")]
    NonIntegral { value: f64 },

    #[error("sampled sup |q| = {sup} reaches M = {m}")]
    HypothesisViolated { sup: f64, m: f64 },

    #[error("robinson_sequence: nothing accepted; best ratio sup|q_n|/(2 lambda^n) = {best_ratio}")]
    NoneAccepted { best_ratio: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Numerical failures (as opposed to rejected input).
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::DomainError | Error::UnsupportedSupport)
    }
}
