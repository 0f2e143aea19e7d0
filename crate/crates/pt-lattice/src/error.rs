//! Error type shared by all modules.

use thiserror::Error;

/// Failure modes of lattice construction, linear algebra, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter fails validation before any numerics run.
    #[error("invalid `{field}`: {message}")]
    InvalidSpec {
        field: &'static str,
        message: String,
    },

    /// Operands of an operation have incompatible sizes.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An input contains NaN or infinity.
    #[error("non-finite input to {operation}")]
    NonFiniteInput { operation: &'static str },

    /// An iterative or direct numerical procedure could not complete.
    #[error("numerical failure in {operation}: {step}")]
    NumericalFailure {
        operation: &'static str,
        step: String,
    },

    /// An eigenmode is self-orthogonal under the bilinear (transpose) pairing,
    /// which signals coalescing modes; mode-resolved decompositions are
    /// undefined there.
    #[error(
        "eigenmode {mode} is self-orthogonal (|v^T v| = {magnitude:.3e}); \
             modes coalesce and the decomposition is undefined"
    )]
    SelfOrthogonalMode { mode: usize, magnitude: f64 },

    /// A matrix required to be Hermitian is not, beyond tolerance.
    #[error("matrix passed as Hermitian has relative asymmetry {residual:.3e}")]
    NotHermitian { residual: f64 },

    /// A matrix required to be complex-symmetric (`H^T = H`) is not.
    #[error("matrix passed as complex-symmetric has relative asymmetry {residual:.3e}")]
    NotSymmetric { residual: f64 },
}

impl Error {
    /// True for errors caused by bad user-supplied parameters (as opposed to
    /// numerical breakdown at runtime).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec { .. }
                | Error::DimensionMismatch { .. }
                | Error::NotHermitian { .. }
                | Error::NotSymmetric { .. }
        )
    }
}

pub type Result<V> = std::result::Result<V, Error>;
