use serde::Serialize;

use super::classify::{Classification, Verdict};
use super::config::{CodeConfig, FeedforwardPolicy};
use super::protocol::{Syndrome, DETECTORS};
use crate::error::Result;
use crate::network::{decode_ledger, LinearForm, Quadrature, Symbol, SymbolStats, PRUNE_TOLERANCE};
use crate::phase_space::{centered_fidelity, GaussianState};
use crate::units::{relative_power_db, Squeezing, VACUUM_VARIANCE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectorGain {
    pub detector: usize,
    pub gain: f64,
}

/// Detector used by the single-detector policy for an error on `channel`.
pub fn readout_detector(channel: usize, q: Quadrature) -> usize {
    match q {
        Quadrature::X => {
            if channel <= 3 {
                1
            } else {
                4
            }
        }
        Quadrature::P => [2, 3, 3, 5, 6, 6, 7, 8, 8][channel - 1],
    }
}

fn detector_form(decoded: &crate::network::LedgerSet, detector: usize) -> &LinearForm {
    let (mode, q) = DETECTORS[detector - 1];
    decoded.get(mode, q)
}

/// Error-free standard deviation of every detector.
pub fn detector_sigmas(squeezing: &Squeezing) -> [f64; 8] {
    let decoded = decode_ledger([false; 9]);
    let stats = SymbolStats::new(*squeezing);
    std::array::from_fn(|d| detector_form(&decoded, d + 1).variance(&stats).sqrt())
}

/// Gains `g_d` such that displacing mode 1 by `−Σ g_d·o_d` removes an
/// error on `channel` in quadrature `q`. Several detectors are combined
/// with inverse-noise weights, which minimizes the added noise.
pub fn gains_for(channel: usize, q: Quadrature, squeezing: &Squeezing, policy: FeedforwardPolicy) -> Vec<DetectorGain> {
    let mut switches = [false; 9];
    switches[channel - 1] = true;
    let decoded = decode_ledger(switches);
    let err = Symbol::Error(channel, q);
    let target = decoded.get(1, q).coefficient(err);
    let stats = SymbolStats::new(*squeezing);
    let candidates: Vec<usize> = match policy {
        FeedforwardPolicy::Single => vec![readout_detector(channel, q)],
        FeedforwardPolicy::Optimal => (1..=8)
            .filter(|&d| DETECTORS[d - 1].1 == q && detector_form(&decoded, d).coefficient(err).abs() > PRUNE_TOLERANCE)
            .collect(),
    };
    let weighted: Vec<(usize, f64, f64)> = candidates
        .iter()
        .map(|&d| {
            let f = detector_form(&decoded, d);
            (d, f.coefficient(err), f.ancilla_part().variance(&stats))
        })
        .collect();
    let norm: f64 = weighted.iter().map(|(_, a, s2)| a * a / s2).sum();
    weighted.into_iter().map(|(d, a, s2)| DetectorGain { detector: d, gain: target * (a / s2) / norm }).collect()
}

/// Corrected mode-1 quadrature minus the input quadrature, as a ledger form.
pub fn residual_form(channel: usize, q: Quadrature, squeezing: &Squeezing, policy: FeedforwardPolicy) -> LinearForm {
    let mut switches = [false; 9];
    switches[channel - 1] = true;
    let decoded = decode_ledger(switches);
    let mut out = decoded.get(1, q).clone();
    for g in gains_for(channel, q, squeezing, policy) {
        out.add_scaled(detector_form(&decoded, g.detector), -g.gain);
    }
    out.add_term(Symbol::Input(q), -1.0);
    out.pruned(PRUNE_TOLERANCE)
}

/// Output variance of the corrected mode for a vacuum-noise input.
pub fn theory_output_variance(channel: usize, q: Quadrature, squeezing: &Squeezing, policy: FeedforwardPolicy) -> f64 {
    VACUUM_VARIANCE + residual_form(channel, q, squeezing, policy).variance(&SymbolStats::new(*squeezing))
}

/// Output noise power in dB relative to shot noise under the
/// single-detector policy.
pub fn theory_output_power(channel: usize, q: Quadrature, squeezing: &Squeezing) -> f64 {
    relative_power_db(theory_output_variance(channel, q, squeezing, FeedforwardPolicy::Single))
        .expect("output variance is positive")
}

/// Ensemble fidelity of the corrected output with a coherent input.
pub fn theory_fidelity(channel: usize, squeezing: &Squeezing, policy: FeedforwardPolicy) -> f64 {
    centered_fidelity(
        theory_output_variance(channel, Quadrature::X, squeezing, policy),
        theory_output_variance(channel, Quadrature::P, squeezing, policy),
    )
}

/// Gains and thresholds for one configuration, computed once per run.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedforwardPlan {
    pub thresholds: [f64; 8],
    channel_gains: Vec<[Vec<DetectorGain>; 2]>,
    correct: bool,
}

impl FeedforwardPlan {
    pub fn new(config: &CodeConfig) -> Self {
        let sigmas = detector_sigmas(&config.squeezing);
        let channel_gains = (1..=9)
            .map(|c| {
                [
                    gains_for(c, Quadrature::X, &config.squeezing, config.policy),
                    gains_for(c, Quadrature::P, &config.squeezing, config.policy),
                ]
            })
            .collect();
        FeedforwardPlan {
            thresholds: sigmas.map(|s| s * config.threshold_sigma),
            channel_gains,
            correct: config.correct,
        }
    }

    pub fn gains(&self, channel: usize, q: Quadrature) -> &[DetectorGain] {
        &self.channel_gains[channel - 1][q as usize]
    }
}

fn apply(gains: &[DetectorGain], syndrome: &Syndrome) -> f64 {
    gains.iter().map(|g| g.gain * syndrome.get(g.detector)).sum()
}

/// Displaces the conditioned mode 1 according to the verdict. Returns the
/// corrected state and whether any displacement was applied.
pub fn feedforward(
    remainder: &GaussianState,
    syndrome: &Syndrome,
    classification: &Classification,
    plan: &FeedforwardPlan,
) -> Result<(GaussianState, bool)> {
    if !plan.correct {
        return Ok((remainder.clone(), false));
    }
    let (dx, dp) = match classification.verdict {
        Verdict::Channel(c) => {
            (apply(plan.gains(c, Quadrature::X), syndrome), apply(plan.gains(c, Quadrature::P), syndrome))
        }
        Verdict::Triplet(t) => (apply(plan.gains(3 * t - 2, Quadrature::X), syndrome), 0.0),
        Verdict::NoError | Verdict::Ambiguous => return Ok((remainder.clone(), false)),
    };
    Ok((remainder.displace(0, -dx, -dp)?, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixture::{self, Radical};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn channel_one_gains() {
        let sq = Squeezing::zero();
        let gx = gains_for(1, Quadrature::X, &sq, FeedforwardPolicy::Single);
        let gp = gains_for(1, Quadrature::P, &sq, FeedforwardPolicy::Single);
        assert_eq!(gx[0].detector, 1);
        close(gx[0].gain, 1.0 / 2f64.sqrt(), 1e-14);
        assert_eq!(gp[0].detector, 2);
        close(gp[0].gain, 1.0 / 6f64.sqrt(), 1e-14);
    }

    #[test]
    fn single_detector_residuals_match_printed_lines() {
        let sq = Squeezing::zero();
        for line in fixture::residual_lines() {
            let detector = line.detectors[0];
            if readout_detector(line.channel, line.quadrature) != detector {
                continue;
            }
            let form = residual_form(line.channel, line.quadrature, &sq, FeedforwardPolicy::Single);
            let printed = line.terms[0];
            let computed = form.coefficient(printed.symbol);
            let expected = if line.erratum.is_some() {
                Radical { sign: -printed.coefficient.sign, ..printed.coefficient }
            } else {
                printed.coefficient
            };
            close(computed, expected.value(), 1e-12);
            assert_eq!(form.len(), 1, "{form}");
        }
    }

    #[test]
    fn channel_two_optimal_gains() {
        let g = gains_for(2, Quadrature::P, &Squeezing::uniform(0.7), FeedforwardPolicy::Optimal);
        assert_eq!(g.len(), 2);
        assert_eq!((g[0].detector, g[1].detector), (2, 3));
        close(g[0].gain, -1.0 / (2.0 * 6f64.sqrt()), 1e-12);
        close(g[1].gain, 2f64.sqrt() / 4.0, 1e-12);
        let r: f64 = 0.7;
        let v = theory_output_variance(2, Quadrature::P, &Squeezing::uniform(r), FeedforwardPolicy::Optimal);
        close(v, 0.25 + (1.0 / 6.0) * 0.25 * (-2.0 * r).exp(), 1e-12);
    }

    #[test]
    fn channel_two_excess_noise_per_detector() {
        let r: f64 = 0.4;
        let e = 0.25 * (-2.0 * r).exp();
        let sq = Squeezing::uniform(r);
        close(theory_output_variance(2, Quadrature::X, &sq, FeedforwardPolicy::Single), 0.25 + 0.5 * e, 1e-12);
        close(theory_output_variance(2, Quadrature::P, &sq, FeedforwardPolicy::Single), 0.25 + 2.0 / 9.0 * e, 1e-12);
    }

    #[test]
    fn output_power_table_at_zero_squeezing() {
        let sq = Squeezing::zero();
        let x = [1.76, 1.76, 1.76, 2.22, 2.22, 2.22, 2.22, 2.22, 2.22];
        let p = [0.67, 0.87, 0.87, 0.67, 0.87, 0.87, 0.67, 0.87, 0.87];
        for c in 1..=9 {
            close(theory_output_power(c, Quadrature::X, &sq), x[c - 1], 0.005);
            close(theory_output_power(c, Quadrature::P, &sq), p[c - 1], 0.005);
        }
    }

    #[test]
    fn output_power_vanishes_at_large_squeezing() {
        let sq = Squeezing::uniform(12.0);
        for c in 1..=9 {
            assert!(theory_output_power(c, Quadrature::X, &sq).abs() < 1e-8);
            assert!(theory_output_power(c, Quadrature::P, &sq).abs() < 1e-8);
        }
    }

    #[test]
    fn closed_form_fidelities() {
        close(theory_fidelity(1, &Squeezing::zero(), FeedforwardPolicy::Single), 0.8593, 1e-4);
        close(theory_fidelity(9, &Squeezing::zero(), FeedforwardPolicy::Single), 0.8216, 1e-4);
        let e = 10f64.powf(-0.1);
        let expect = centered_fidelity(0.25 + 0.125 * e, 0.25 + e / 24.0);
        close(theory_fidelity(1, &Squeezing::uniform_db(1.0), FeedforwardPolicy::Single), expect, 1e-12);
        close(expect, 0.8846, 1e-4);
    }

    #[test]
    fn optimal_never_worse_than_single() {
        for r in [0.0, 0.3, 1.0] {
            let sq = Squeezing([r, r + 0.1, r, r + 0.2, r, r + 0.3, r, r + 0.05]);
            for c in 1..=9 {
                for q in [Quadrature::X, Quadrature::P] {
                    let s = theory_output_variance(c, q, &sq, FeedforwardPolicy::Single);
                    let o = theory_output_variance(c, q, &sq, FeedforwardPolicy::Optimal);
                    assert!(o <= s + 1e-15, "channel {c} {q:?}: {o} > {s}");
                }
            }
        }
    }

    #[test]
    fn sigmas_follow_squeezing() {
        let sq = Squeezing([0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]);
        let s = detector_sigmas(&sq);
        // det1 reads an1, det2 an2, det3 an3, det4 an4, det5 an5, det6 an6, det7 an7, det8 an8.
        for (d, sigma) in s.iter().enumerate() {
            close(*sigma, 0.5 * (-sq.get(d + 1)).exp(), 1e-14);
        }
    }
}
