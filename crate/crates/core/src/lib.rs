//! Gaussian phase-space simulation of continuous-variable quantum error
//! correction with linear optics.
//!
//! The crate covers the nine-wavepacket code built from four tritters and
//! eight squeezed ancillas, its three-mode variant under stochastic
//! displacement channels, and the multipartite entanglement witnesses of the
//! encoded state. Everything uses the `ħ = 1/2` convention: the vacuum has
//! quadrature variance `1/4` and all noise powers are quoted in dB relative
//! to that level.
//!
//! Module map:
//!
//! * [`phase_space`]: Gaussian states, mixtures, mode matrices, homodyne
//!   conditioning and fidelity.
//! * [`network`]: tritters, the encoder/decoder networks and the
//!   Heisenberg-picture coefficient ledger.
//! * [`shor9`]: the nine-mode protocol (encode, error, decode, syndrome,
//!   classification, feedforward, scoring).
//! * [`three_mode`]: the three-mode code under independent stochastic
//!   x-displacement channels.
//! * [`witness`]: nullifiers, logical quadratures and inseparability
//!   witnesses.

// `!(v > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod montecarlo;
pub mod network;
pub mod phase_space;
pub mod shor9;
pub mod three_mode;
pub mod units;
pub mod witness;

pub use error::{QecError, Result};
pub use phase_space::{GaussianMixture, GaussianState, ModeMatrix, QuadratureTarget};
pub use units::{Squeezing, VACUUM_VARIANCE};
