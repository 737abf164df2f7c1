use thiserror::Error;

/// Errors raised by the attrition toolkit.
///
/// Variants split into two families: configuration/input problems (the
/// caller passed something invalid) and numerical failures (the inputs were
/// fine but a solver could not deliver the requested accuracy). The CLI maps
/// these to exit codes 2 and 3 respectively.
#[derive(Debug, Error)]
pub enum Error {
    #[error("prize sequence is not strictly increasing: V_{index} = {prev} then {next}")]
    NonMonotonePrize { index: usize, prev: f64, next: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {value} outside the domain {domain}")]
    DomainError { value: f64, domain: String },

    #[error("rates are not pairwise distinct (min relative gap {gap:e})")]
    DegenerateRates { gap: f64 },

    #[error("V'(x) = {derivative:e} at x = {x} is too small to invert")]
    SingularDerivative { x: f64, derivative: f64 },

    #[error("not a valid cdf: {0}")]
    InvalidCdf(String),

    #[error("strategy densities differ at zero in round {round}: {alpha} vs {beta}")]
    MismatchedAtZero { round: usize, alpha: f64, beta: f64 },

    #[error("step {step} too large: {reason}")]
    StepTooLarge { step: f64, reason: String },

    #[error("improper integral tail {tail:e} exceeds tolerance {tolerance:e}")]
    TailNotConverged { tail: f64, tolerance: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by solver accuracy rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepTooLarge { .. }
                | Error::TailNotConverged { .. }
                | Error::NumericalFailure(_)
                | Error::DegenerateRates { .. }
                | Error::SingularDerivative { .. }
        )
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(value: f64, domain: impl Into<String>) -> Self {
        Error::DomainError {
            value,
            domain: domain.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
