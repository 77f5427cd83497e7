use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal backend needs at least 10 digits of precision, got {0}")]
    Precision(u32),
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(String, String),
    #[error("value {0} lies outside [0, 1]")]
    OutOfUnit(String),
    #[error("parameter h = {0} lies outside (1, 2]")]
    ParamRange(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("period {0} exceeds the enumeration bound of 20")]
    PeriodTooLarge(usize),
    #[error("no onset polynomial for period {0} (supported: 3, 5, 6, 7)")]
    UnsupportedPeriod(u32),
    #[error("net of {0} points exceeds the 10^7 cap")]
    NetTooLarge(u64),
    #[error("root finder did not converge within {0} iterations")]
    NoConvergence(usize),
}

impl Error {
    /// Errors caused by user-supplied values rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::NoConvergence(_))
    }
}
