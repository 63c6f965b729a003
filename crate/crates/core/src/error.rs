use alloc::string::String;
use core::fmt;

/// Errors surfaced by the alignment library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A dimension argument was zero or otherwise unusable.
    InvalidDimension { what: &'static str, got: usize },
    /// Operand shapes do not agree.
    DimMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A Gram matrix was numerically rank deficient (condition estimate
    /// above the guard threshold, or a non-positive Cholesky pivot).
    RankDeficient { dim: usize, cond: f64 },
    /// Iterative eigen-solve hit its cap without meeting the residual bound.
    NonConvergence { iterations: usize, residual: f64 },
    /// A vector or matrix that must be nonzero degenerated to zero.
    Degenerate { what: &'static str },
    /// An input violated a caller-side contract (e.g. non-unit beamformer).
    ContractViolation { what: &'static str, value: f64 },
    /// A specification value failed validation.
    InvalidSpec { what: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { what, got } => {
                write!(f, "invalid dimension for {what}: {got}")
            }
            Error::DimMismatch { op, left, right } => write!(
                f,
                "dimension mismatch in {op}: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::RankDeficient { dim, cond } => write!(
                f,
                "rank-deficient Gram matrix of dimension {dim} (condition estimate {cond:.3e})"
            ),
            Error::NonConvergence {
                iterations,
                residual,
            } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:.3e})"
            ),
            Error::Degenerate { what } => write!(f, "degenerate {what}"),
            Error::ContractViolation { what, value } => {
                write!(f, "contract violation: {what} (value {value:.3e})")
            }
            Error::InvalidSpec { what } => write!(f, "invalid specification: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
