use thiserror::Error;

/// Errors raised by the analytic, numeric and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("measure `{measure}` is not available for the {channel} channel")]
    UnsupportedMeasure { measure: &'static str, channel: &'static str },

    #[error("spectrum is infeasible: {0}")]
    InfeasibleSpectrum(String),

    #[error("spectrum violates the rate lower bound: c0 = {c0} < -ln(1-R) = {bound}")]
    RateBoundViolated { c0: f64, bound: f64 },

    #[error("survival fraction {tau} is not self-decodable for c* = {c_star} (needs tau > {limit})")]
    NotSelfDecodable { c_star: f64, tau: f64, limit: f64 },

    #[error("instantaneous SNR {theta} does not exceed the punctured threshold {chi}")]
    NotReliable { theta: f64, chi: f64 },

    #[error("safety margin pushes the listen fraction to {value}, not below tau0 = {tau0}")]
    MarginTooLarge { value: f64, tau0: f64 },

    #[error("{m} slots exceed the enumeration cap of {cap}")]
    TooManyHelpers { m: usize, cap: usize },

    #[error("node {member} is not a helper for M = {m}")]
    InvalidMember { member: usize, m: usize },

    #[error("closed-form assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid cooperation config: {0}")]
    InvalidConfig(String),

    #[error("curve does not support a slope fit: {0}")]
    InsufficientRange(String),

    #[error("no feasible tau0 for c* = {c_star}, M = {m}")]
    InfeasibleTauRange { c_star: f64, m: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
