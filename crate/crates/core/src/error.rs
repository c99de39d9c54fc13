use thiserror::Error;

/// Errors raised by the library. Numeric payloads are reported as `f64`
/// regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero list is empty")]
    EmptyInput,

    #[error("zero at the origin (P(0) and Q(0) must be nonzero)")]
    ZeroAtOrigin,

    #[error("r must be at least 2, got {0}")]
    InvalidExponent(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("t = {re} + {im}i coincides with a zero of P or Q")]
    Pole { re: f64, im: f64 },

    #[error("no sign change of {what} on [{lo}, {hi}]")]
    Bracket { what: &'static str, lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations (max scaled residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("D(t, z) has a repeated root: closest pair at distance {distance:e}")]
    MultipleRoot { distance: f64 },

    #[error("index {index} out of range (max {max})")]
    Index { index: usize, max: usize },

    #[error("hypotheses not satisfied: {0}")]
    Hypothesis(String),

    #[error("sign_exponent * z(theta) fails to increase at sample {index}")]
    MonotonicityViolation { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
