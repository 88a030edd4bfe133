//! Gaussian phase-space representation of multimode optical states.
//!
//! Quadratures are interleaved `(x1, p1, x2, p2, ...)` and measured in units
//! where the vacuum variance is `1/4`.

mod fidelity;
mod mixture;
mod mode_matrix;
mod state;

pub use fidelity::{centered_fidelity, fidelity_to_coherent, MAX_XP_CORRELATION};
pub use mixture::{mixture_fidelity_to_coherent, GaussianMixture};
pub use mode_matrix::ModeMatrix;
pub use state::{GaussianState, QuadratureTarget, SqueezeAxis};

/// Tolerance for covariance symmetry and positivity checks.
pub const COV_TOLERANCE: f64 = 1e-10;
/// Tolerance on the uncertainty bound `ν ≥ 1/4` for symplectic eigenvalues.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;
/// Smallest measured-quadrature variance used when conditioning.
pub const HOMODYNE_VARIANCE_FLOOR: f64 = 1e-14;
