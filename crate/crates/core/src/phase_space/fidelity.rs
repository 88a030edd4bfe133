use super::GaussianState;
use crate::error::{QecError, Result};
use crate::units::VACUUM_VARIANCE;

/// Largest |Vxp| accepted by [`fidelity_to_coherent`].
pub const MAX_XP_CORRELATION: f64 = 1e-9;

/// Overlap `⟨β|ρ|β⟩` of a single-mode Gaussian state with uncorrelated
/// quadratures and the coherent state of mean `target`.
///
/// With `Σ = V + 1/4` per quadrature this is
/// `exp(-Δx²/(2Σx) - Δp²/(2Σp)) / (2·sqrt(Σx·Σp))`, which reduces to
/// [`centered_fidelity`] when the means agree.
pub fn fidelity_to_coherent(state: &GaussianState, target: (f64, f64)) -> Result<f64> {
    if state.n_modes() != 1 {
        return Err(QecError::DimensionMismatch { expected: 1, actual: state.n_modes() });
    }
    let [[vx, vxp], [_, vp]] = state.mode_cov(0);
    if vxp.abs() >= MAX_XP_CORRELATION {
        return Err(QecError::CorrelatedQuadratures { cov_xp: vxp });
    }
    let (mx, mp) = state.mode_mean(0);
    let sx = vx + VACUUM_VARIANCE;
    let sp = vp + VACUUM_VARIANCE;
    let dx = mx - target.0;
    let dp = mp - target.1;
    let f = (-dx * dx / (2.0 * sx) - dp * dp / (2.0 * sp)).exp() / (2.0 * (sx * sp).sqrt());
    Ok(f.clamp(0.0, 1.0))
}

/// Fidelity of a zero-offset output with quadrature variances `(vx, vp)`:
/// `2 / sqrt((1 + 4Vx)(1 + 4Vp))`.
pub fn centered_fidelity(vx: f64, vp: f64) -> f64 {
    2.0 / ((1.0 + 4.0 * vx) * (1.0 + 4.0 * vp)).sqrt()
}
