use thiserror::Error;

use crate::scalar::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty block: c = {c} is below -r = -{r}")]
    EmptyBlock { r: HalfInt, c: HalfInt },

    #[error("parity mismatch: 2r = {r2} and 2c = {c2} must have equal parity")]
    Parity { r2: i64, c2: i64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("eigensolver did not converge for block r = {r}, c = {c} (dim {dim})")]
    NoConvergence { r: HalfInt, c: HalfInt, dim: usize },

    #[error("outside the validity regime: {0}")]
    Domain(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("degenerate ladder: level {level} coincides with the ground level")]
    DegenerateLadder { level: usize },

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("no admissible root in bracket [{lo:e}, {hi:e}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("steady-state iteration did not converge after {iterations} steps (bracket [{lo:e}, {hi:e}])")]
    SolverNoConvergence { iterations: usize, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
