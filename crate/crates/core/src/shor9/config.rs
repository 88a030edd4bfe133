use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};
use crate::units::Squeezing;

pub const DEFAULT_THRESHOLD_SIGMA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ErrorModel {
    None,
    /// Fixed displacement `(dx, dp)` on `channel`.
    Fixed {
        channel: usize,
        dx: f64,
        dp: f64,
    },
    /// Displacement of magnitude `amplitude` at a uniformly random phase.
    RandomPhase {
        channel: usize,
        amplitude: f64,
    },
}

impl ErrorModel {
    /// Fixed error of magnitude `amplitude` at phase `phase` (radians from
    /// the x axis).
    pub fn polar(channel: usize, amplitude: f64, phase: f64) -> Self {
        ErrorModel::Fixed { channel, dx: amplitude * phase.cos(), dp: amplitude * phase.sin() }
    }

    pub fn channel(&self) -> Option<usize> {
        match *self {
            ErrorModel::None => None,
            ErrorModel::Fixed { channel, .. } | ErrorModel::RandomPhase { channel, .. } => Some(channel),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeedforwardPolicy {
    /// One detector per quadrature, as in the experimental feedforward table.
    Single,
    /// Noise-weighted combination of every detector that senses the error.
    Optimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub squeezing: Squeezing,
    pub error: ErrorModel,
    pub policy: FeedforwardPolicy,
    /// Detector threshold in units of its error-free standard deviation.
    pub threshold_sigma: f64,
    /// When false the syndrome is still measured but no displacement is fed
    /// forward.
    pub correct: bool,
}

impl Default for CodeConfig {
    fn default() -> Self {
        CodeConfig {
            squeezing: Squeezing::zero(),
            error: ErrorModel::None,
            policy: FeedforwardPolicy::Single,
            threshold_sigma: DEFAULT_THRESHOLD_SIGMA,
            correct: true,
        }
    }
}

impl CodeConfig {
    pub fn new(squeezing: Squeezing, error: ErrorModel) -> Self {
        CodeConfig { squeezing, error, ..CodeConfig::default() }
    }

    pub fn with_policy(mut self, policy: FeedforwardPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.squeezing.validate()?;
        if !(self.threshold_sigma.is_finite() && self.threshold_sigma > 0.0) {
            return Err(QecError::InvalidParameter(format!(
                "threshold multiplier must be positive, got {}",
                self.threshold_sigma
            )));
        }
        if let Some(c) = self.error.channel() {
            if !(1..=9).contains(&c) {
                return Err(QecError::InvalidParameter(format!("channel must be in 1..=9, got {c}")));
            }
        }
        match self.error {
            ErrorModel::Fixed { dx, dp, .. } if !(dx.is_finite() && dp.is_finite()) => {
                Err(QecError::InvalidParameter("error displacement must be finite".into()))
            }
            ErrorModel::RandomPhase { amplitude, .. } if !(amplitude.is_finite() && amplitude >= 0.0) => {
                Err(QecError::InvalidParameter(format!("error amplitude must be finite and >= 0, got {amplitude}")))
            }
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_channel_and_amplitude() {
        let c = CodeConfig::new(Squeezing::zero(), ErrorModel::Fixed { channel: 10, dx: 1.0, dp: 0.0 });
        assert!(c.validate().is_err());
        let c = CodeConfig::new(Squeezing::zero(), ErrorModel::RandomPhase { channel: 1, amplitude: -1.0 });
        assert!(c.validate().is_err());
        let c = CodeConfig::new(Squeezing::uniform(-0.1), ErrorModel::None);
        assert!(c.validate().is_err());
        assert!(CodeConfig::default().validate().is_ok());
    }

    #[test]
    fn polar_error() {
        let e = ErrorModel::polar(3, 2.0, std::f64::consts::FRAC_PI_2);
        match e {
            ErrorModel::Fixed { channel, dx, dp } => {
                assert_eq!(channel, 3);
                assert!(dx.abs() < 1e-15);
                assert!((dp - 2.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }
}
