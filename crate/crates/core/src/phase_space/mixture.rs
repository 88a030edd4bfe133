use rand::Rng;

use super::{fidelity_to_coherent, GaussianState, QuadratureTarget};
use crate::error::{QecError, Result};

/// Weight-sum drift tolerated silently; larger drift is renormalized with a
/// recorded warning.
pub const WEIGHT_DRIFT_WARN: f64 = 1e-9;

/// Convex combination of Gaussian states with a common mode count.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    components: Vec<(f64, GaussianState)>,
    warnings: Vec<String>,
}

impl GaussianMixture {
    pub fn new(components: Vec<(f64, GaussianState)>) -> Result<Self> {
        let mut warnings = Vec::new();
        let components = normalize(components, &mut warnings)?;
        Ok(GaussianMixture { components, warnings })
    }

    pub fn from_state(state: GaussianState) -> Self {
        GaussianMixture { components: vec![(1.0, state)], warnings: Vec::new() }
    }

    pub fn components(&self) -> &[(f64, GaussianState)] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        self.components[0].1.n_modes()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.components.iter().map(|(w, _)| *w)
    }

    /// Renormalization notices accumulated so far.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Applies a state map to every component, keeping the weights.
    pub fn map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&GaussianState) -> Result<GaussianState>,
    {
        let components = self.components.iter().map(|(w, s)| Ok((*w, f(s)?))).collect::<Result<Vec<_>>>()?;
        Ok(GaussianMixture { components, warnings: self.warnings.clone() })
    }

    /// Replaces every component by a weighted sub-mixture (weights multiply).
    pub fn flat_map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&GaussianState) -> Result<Vec<(f64, GaussianState)>>,
    {
        let mut out = Vec::new();
        for (w, s) in &self.components {
            for (v, t) in f(s)? {
                out.push((w * v, t));
            }
        }
        let mut warnings = self.warnings.clone();
        let components = normalize(out, &mut warnings)?;
        Ok(GaussianMixture { components, warnings })
    }

    /// Posterior mixture of the remaining modes given a homodyne outcome:
    /// each component is conditioned and reweighted by its likelihood.
    pub fn homodyne_condition(&self, target: QuadratureTarget, outcome: f64) -> Result<Option<Self>> {
        if self.components.len() == 1 {
            let rest = self.components[0].1.homodyne_condition(target, outcome)?;
            return Ok(rest.map(|s| GaussianMixture { components: vec![(1.0, s)], warnings: self.warnings.clone() }));
        }
        let mut log_w = Vec::with_capacity(self.components.len());
        let mut states = Vec::with_capacity(self.components.len());
        for (w, s) in &self.components {
            let m = s.quadrature_mean(target)?;
            let v = s.marginal_variance(target)?;
            if !(v > 0.0) {
                return Err(QecError::InvariantViolation(format!(
                    "measured quadrature variance {v:e} is not positive"
                )));
            }
            let d = outcome - m;
            log_w.push(w.ln() - 0.5 * v.ln() - d * d / (2.0 * v));
            states.push(s.homodyne_condition(target, outcome)?);
        }
        if states.iter().any(Option::is_none) {
            return Ok(None);
        }
        let max = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = log_w.iter().map(|l| (l - max).exp()).collect();
        let total: f64 = raw.iter().sum();
        let components = raw.into_iter().zip(states).map(|(w, s)| (w / total, s.expect("checked above"))).collect();
        Ok(Some(GaussianMixture { components, warnings: self.warnings.clone() }))
    }

    /// Picks a component by weight, samples the outcome within it, then
    /// conditions the whole mixture on that outcome.
    pub fn homodyne_sample<R: Rng + ?Sized>(
        &self,
        target: QuadratureTarget,
        rng: &mut R,
    ) -> Result<(f64, Option<Self>)> {
        let index = if self.components.len() == 1 {
            0
        } else {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut pick = self.components.len() - 1;
            for (i, (w, _)) in self.components.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = i;
                    break;
                }
            }
            pick
        };
        let (outcome, _) = self.components[index].1.homodyne_sample(target, rng)?;
        let rest = self.homodyne_condition(target, outcome)?;
        Ok((outcome, rest))
    }

    /// Index of the component selected by a uniform draw, for callers that
    /// need to sample a whole trajectory from one component.
    pub fn sample_component<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.components.len() == 1 {
            return 0;
        }
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, (w, _)) in self.components.iter().enumerate() {
            acc += w;
            if u < acc {
                return i;
            }
        }
        self.components.len() - 1
    }
}

/// Weight-averaged overlap of a single-mode mixture with a coherent state.
pub fn mixture_fidelity_to_coherent(mixture: &GaussianMixture, target: (f64, f64)) -> Result<f64> {
    let mut f = 0.0;
    for (w, s) in mixture.components() {
        f += w * fidelity_to_coherent(s, target)?;
    }
    Ok(f)
}

fn normalize(components: Vec<(f64, GaussianState)>, warnings: &mut Vec<String>) -> Result<Vec<(f64, GaussianState)>> {
    if components.is_empty() {
        return Err(QecError::InvalidWeights("mixture has no components".into()));
    }
    let n = components[0].1.n_modes();
    if let Some((_, s)) = components.iter().find(|(_, s)| s.n_modes() != n) {
        return Err(QecError::DimensionMismatch { expected: n, actual: s.n_modes() });
    }
    if components.iter().any(|(w, _)| !w.is_finite() || *w < 0.0) {
        return Err(QecError::InvalidWeights("weights must be finite and non-negative".into()));
    }
    let total: f64 = components.iter().map(|(w, _)| w).sum();
    if !(total > 0.0) {
        return Err(QecError::InvalidWeights("weights sum to zero".into()));
    }
    let drift = (total - 1.0).abs();
    if drift > WEIGHT_DRIFT_WARN {
        let msg = format!("mixture weights summed to {total}; renormalized");
        log::warn!("{msg}");
        warnings.push(msg);
    }
    if drift > 1e-12 {
        Ok(components.into_iter().map(|(w, s)| (w / total, s)).collect())
    } else {
        Ok(components)
    }
}
