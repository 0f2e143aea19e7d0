//! Non-Hermitian tight-binding lattices with balanced gain and loss:
//! Hamiltonian construction, non-unitary time evolution, conserved
//! parity/intertwiner products, and phase-locking diagnostics.
//!
//! The crate is organized as:
//! - [`linalg`]: dense complex matrices, `expm`, and a non-symmetric
//!   eigensolver;
//! - [`models`]: the lattice catalog (dimer, trimer, uniform chain,
//!   alternating-bond and periodic-profile chains, the
//!   perfect-state-transfer chain, and a two-tunneling ring);
//! - [`evolve`]: renormalized propagation under `exp(-iHt)` and phase
//!   extraction;
//! - [`invariants`]: parity products, invariant series along trajectories,
//!   bi-orthogonal mode expansion, and intertwiner enumeration;
//! - [`analysis`]: symmetry-breaking thresholds, phase-locking detection,
//!   and period estimation.
//!
//! Everything is generic over the real scalar (f32 or f64) through the
//! [`Real`] trait; the aliases below fix f64, the precision used by the CLI
//! and the test suite.

pub mod analysis;
pub mod error;
pub mod evolve;
pub mod invariants;
pub mod linalg;
pub mod models;
mod scalar;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::Real;

/// Library version, embedded in CLI output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Double-precision complex scalar.
pub type Complex64 = Complex<f64>;
/// Single-precision complex scalar.
pub type Complex32 = Complex<f32>;

/// Double-precision matrix.
pub type Matrix = linalg::CMatrix<f64>;
/// Double-precision vector.
pub type Vector = linalg::CVector<f64>;
/// Double-precision lattice description.
pub type Lattice = models::LatticeSpec<f64>;

/// Single-precision matrix.
pub type Matrix32 = linalg::CMatrix<f32>;
/// Single-precision vector.
pub type Vector32 = linalg::CVector<f32>;
/// Single-precision lattice description.
pub type Lattice32 = models::LatticeSpec<f32>;
