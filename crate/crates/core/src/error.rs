use thiserror::Error;

use crate::ball::ComplexBall;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain (branch cut, zero divisor, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameter outside the declared family (e.g. `a` a non-positive integer).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Summation direction lies on an anti-Stokes ray.
    #[error("direction {theta} is anti-Stokes for this kernel; try {suggested}")]
    AntiStokes { theta: String, suggested: String },
    /// Refinement hit its precision cap before reaching the target radius.
    #[error("precision exhausted at {bits} bits")]
    PrecisionExhausted { bits: u32, best: Box<ComplexBall> },
    /// An iterative scheme failed to meet its error budget.
    #[error("non-convergent: {0}")]
    NonConvergent(String),
}
