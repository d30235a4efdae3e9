//! Error type shared by all modules of the crate.

use alloc::string::String;
use core::fmt;

use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, CoreError>;

/// Everything that can go wrong in the numerical layer.
///
/// Construction errors (bad dimensions, bad parameters) and evaluation
/// errors (non-finite values, singular configurations) share one enum so
/// that the operations can be composed freely.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A point, matrix or grid had an incompatible dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A field evaluated to NaN or infinity; carries the offending point.
    NonFiniteEval { point: ComplexPointRepr },
    /// Derivatives requested too close to a non-smooth point of the field.
    NearSingularity { point: ComplexPointRepr },
    /// A finite-difference step outside (0, 1).
    InvalidStep { h: f64 },
    /// Grid or permanent size beyond the configured budget.
    BudgetExceeded { requested: usize, budget: usize },
    /// Quadrature requested for a field whose growth class it cannot handle.
    UnsupportedGrowth,
    /// Kernel evaluation at t = 0, where the kernel is singular.
    SingularKernel,
    /// An operation that requires a circular-symmetric field got a field
    /// without that tag.
    NotCircular,
    /// Monte Carlo configuration with an expected relative error too large
    /// to be meaningful (heavy-tail exponents need more samples).
    VarianceWarning { alpha: f64, min_samples: usize },
    /// Catch-all for invalid parameters; the message states the constraint.
    InvalidInput(String),
}

/// A plain copy of a point's coordinates, small enough to live in an error.
pub type ComplexPointRepr = alloc::vec::Vec<Complex64>;

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            CoreError::NonFiniteEval { point } => {
                write!(f, "non-finite field evaluation at {point:?}")
            }
            CoreError::NearSingularity { point } => {
                write!(f, "derivative stencil too close to a singularity at {point:?}")
            }
            CoreError::InvalidStep { h } => {
                write!(f, "finite-difference step {h} outside (0, 1)")
            }
            CoreError::BudgetExceeded { requested, budget } => {
                write!(f, "size {requested} exceeds budget {budget}")
            }
            CoreError::UnsupportedGrowth => {
                write!(f, "field growth class not supported by this quadrature")
            }
            CoreError::SingularKernel => write!(f, "kernel is singular at t = 0"),
            CoreError::NotCircular => {
                write!(f, "operation requires a circular-symmetric field")
            }
            CoreError::VarianceWarning { alpha, min_samples } => write!(
                f,
                "exponent {alpha} is heavy-tailed; need at least {min_samples} samples"
            ),
            CoreError::InvalidInput(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for CoreError {}
