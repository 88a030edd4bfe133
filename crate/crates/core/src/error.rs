use thiserror::Error;

pub type Result<T> = std::result::Result<T, QecError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QecError {
    #[error("empty register")]
    EmptyRegister,
    #[error("empty list of states")]
    EmptyStateList,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mode {mode} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),
    #[error("mode matrix is not orthogonal (max |MᵀM - I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("x-p correlation {cov_xp:e} is outside the fidelity formula's domain")]
    CorrelatedQuadratures { cov_xp: f64 },
    #[error("mixture would have {components} components, limit is {limit}")]
    MixtureTooLarge { components: usize, limit: usize },
    #[error("invalid mixture weights: {0}")]
    InvalidWeights(String),
}

impl QecError {
    /// True for errors that signal a broken physical invariant rather than a
    /// bad request.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, QecError::InvariantViolation(_))
    }
}
