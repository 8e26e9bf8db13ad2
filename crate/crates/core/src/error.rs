use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("position {x} is outside the deformation domain ({reason})")]
    Domain { x: f64, reason: &'static str },

    #[error("quadrature did not reach tolerance {tolerance:e}: estimated error {estimate:e}")]
    ToleranceNotReached { tolerance: f64, estimate: f64 },

    #[error("node-doubling check failed for {quantity}: {coarse} vs {fine}")]
    QuadratureNonConvergence {
        quantity: &'static str,
        coarse: f64,
        fine: f64,
    },

    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),

    #[error("exponent overflow evaluating {0}")]
    Overflow(&'static str),

    #[error("size guard: {what} = {value} exceeds limit {limit}")]
    SizeGuard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("integration unstable at t = {time}: minimum value {min:e} at x = {x}")]
    Unstable { time: f64, min: f64, x: f64 },

    #[error("grid: {0}")]
    Grid(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
