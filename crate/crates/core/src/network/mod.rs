//! Tritter networks and the Heisenberg-picture coefficient ledger.
//!
//! The ledger writes every output quadrature as a linear form over the
//! input quadratures, the vacuum quadratures of the eight ancillas and the
//! per-channel error displacements. Squeezing factors `e^{±r_k}` are not
//! stored in the coefficients; they are folded in when a form is evaluated.

mod check;
pub mod fixture;
mod ledger;
mod tritter;

pub use check::{ledger_check, DiffKind, LedgerDiff, LedgerReport};
pub use ledger::{
    ancilla_axis, decode_ledger, encode_ledger, mode_source, LedgerSet, LinearForm, ModeSource, Quadrature, Symbol,
    SymbolStats, SymbolValues, PRUNE_TOLERANCE,
};
pub use tritter::{
    build_decoder_matrix, build_encoder_matrix, splitter, tritter, tritter_from_splitters, ENCODER_STAGES,
};
