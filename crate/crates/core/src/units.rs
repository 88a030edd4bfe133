//! Unit conventions: `ħ = 1/2`, vacuum variance `1/4`, squeezing in nepers.

use serde::{Deserialize, Serialize};

use crate::error::{QecError, Result};

/// Quadrature variance of the vacuum (shot-noise level).
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Noise power of `variance` in dB relative to the shot-noise level.
pub fn relative_power_db(variance: f64) -> Result<f64> {
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(QecError::InvalidParameter(format!("variance must be positive and finite, got {variance}")));
    }
    Ok(10.0 * (variance / VACUUM_VARIANCE).log10())
}

/// Squeezing level in dB below shot noise to the squeezing parameter `r`.
///
/// `r = dB · ln 10 / 20`, so 1 dB gives `e^{-2r} = 10^{-0.1}`.
pub fn db_to_nepers(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

pub fn nepers_to_db(r: f64) -> f64 {
    r * 20.0 / std::f64::consts::LN_10
}

/// Squeezing parameters `r1..r8` of the eight ancillas, indexed by ancilla
/// label (1-based through [`Squeezing::get`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Squeezing(pub [f64; 8]);

impl Squeezing {
    pub fn uniform(r: f64) -> Self {
        Squeezing([r; 8])
    }

    pub fn zero() -> Self {
        Squeezing::uniform(0.0)
    }

    pub fn from_db(db: [f64; 8]) -> Self {
        Squeezing(db.map(db_to_nepers))
    }

    pub fn uniform_db(db: f64) -> Self {
        Squeezing::uniform(db_to_nepers(db))
    }

    /// Squeezing parameter of ancilla `k` (1..=8).
    pub fn get(&self, ancilla: usize) -> f64 {
        self.0[ancilla - 1]
    }

    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.0.iter().enumerate() {
            if !r.is_finite() || *r < 0.0 {
                return Err(QecError::InvalidParameter(format!(
                    "squeezing r{} must be finite and non-negative, got {r}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl Default for Squeezing {
    fn default() -> Self {
        Squeezing::zero()
    }
}
