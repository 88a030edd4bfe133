use rand::Rng;
use serde::Serialize;

use super::classify::{classify, Verdict};
use super::config::CodeConfig;
use super::feedforward::{feedforward, FeedforwardPlan};
use super::protocol::{decode9, encode9, inject_error, measure_syndrome};
use crate::error::{QecError, Result};
use crate::montecarlo::{run_trials, Estimate};
use crate::phase_space::{fidelity_to_coherent, GaussianState};
use crate::units::relative_power_db;

/// One end-to-end trial, flattened for CSV/JSON output.
///
/// `channel` is 0 when no error was injected. `power_*_db` is the
/// second moment of the corrected quadrature about the input mean,
/// relative to shot noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub channel: usize,
    pub dx: f64,
    pub dp: f64,
    pub det1: f64,
    pub det2: f64,
    pub det3: f64,
    pub det4: f64,
    pub det5: f64,
    pub det6: f64,
    pub det7: f64,
    pub det8: f64,
    pub verdict: Verdict,
    pub corrected: bool,
    pub out_mean_x: f64,
    pub out_mean_p: f64,
    pub out_var_x: f64,
    pub out_var_p: f64,
    pub fidelity: f64,
    pub power_x_db: f64,
    pub power_p_db: f64,
}

impl TrialRecord {
    pub fn syndrome(&self) -> [f64; 8] {
        [self.det1, self.det2, self.det3, self.det4, self.det5, self.det6, self.det7, self.det8]
    }

    /// Second moments of the corrected quadratures about `target`.
    pub fn second_moments(&self, target: (f64, f64)) -> (f64, f64) {
        (self.out_var_x + (self.out_mean_x - target.0).powi(2), self.out_var_p + (self.out_mean_p - target.1).powi(2))
    }
}

struct TrialContext {
    config: CodeConfig,
    plan: FeedforwardPlan,
    encoded: GaussianState,
    target: (f64, f64),
}

impl TrialContext {
    fn new(config: &CodeConfig, input: &GaussianState) -> Result<Self> {
        config.validate()?;
        Ok(TrialContext {
            config: *config,
            plan: FeedforwardPlan::new(config),
            encoded: encode9(input, &config.squeezing)?,
            target: input.mode_mean(0),
        })
    }

    fn run<R: Rng + ?Sized>(&self, trial: u64, rng: &mut R) -> Result<TrialRecord> {
        let (noisy, event) = inject_error(&self.encoded, &self.config.error, rng)?;
        let decoded = decode9(&noisy)?;
        let (syndrome, remainder) = measure_syndrome(&decoded, rng)?;
        let classification = classify(&syndrome, &self.plan.thresholds);
        let (out, corrected) = feedforward(&remainder, &syndrome, &classification, &self.plan)?;
        let fidelity = fidelity_to_coherent(&out, self.target)?;
        let (mx, mp) = out.mode_mean(0);
        let cov = out.mode_cov(0);
        let s = syndrome.outcomes;
        let mut record = TrialRecord {
            trial,
            channel: event.map_or(0, |e| e.channel),
            dx: event.map_or(0.0, |e| e.dx),
            dp: event.map_or(0.0, |e| e.dp),
            det1: s[0],
            det2: s[1],
            det3: s[2],
            det4: s[3],
            det5: s[4],
            det6: s[5],
            det7: s[6],
            det8: s[7],
            verdict: classification.verdict,
            corrected,
            out_mean_x: mx,
            out_mean_p: mp,
            out_var_x: cov[0][0],
            out_var_p: cov[1][1],
            fidelity,
            power_x_db: 0.0,
            power_p_db: 0.0,
        };
        let (vx, vp) = record.second_moments(self.target);
        record.power_x_db = relative_power_db(vx)?;
        record.power_p_db = relative_power_db(vp)?;
        Ok(record)
    }
}

/// Runs one trial: encode, inject, decode, measure, classify, correct,
/// score against the input mean.
pub fn run_trial<R: Rng + ?Sized>(config: &CodeConfig, input: &GaussianState, rng: &mut R) -> Result<TrialRecord> {
    TrialContext::new(config, input)?.run(0, rng)
}

/// Runs `trials` trials with per-trial streams derived from `seed`.
/// Records come back in trial order whatever the thread count.
pub fn run_ensemble(
    config: &CodeConfig,
    input: &GaussianState,
    trials: u64,
    seed: u64,
) -> Result<(Vec<TrialRecord>, EnsembleSummary)> {
    let ctx = TrialContext::new(config, input)?;
    let records: Vec<TrialRecord> =
        run_trials(seed, trials, |i, rng| ctx.run(i, rng)).into_iter().collect::<Result<_>>()?;
    let summary = summarize(&records, config.error.channel(), ctx.target)?;
    Ok((records, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleSummary {
    pub trials: u64,
    pub fidelity: Estimate,
    /// Mean second moment of each corrected quadrature about the input mean.
    pub power_x: Estimate,
    pub power_p: Estimate,
    pub power_x_db: f64,
    pub power_x_db_stderr: f64,
    pub power_p_db: f64,
    pub power_p_db_stderr: f64,
    /// Trials whose verdict named the injected channel (or no-error when
    /// nothing was injected).
    pub correct_verdicts: u64,
    pub ambiguous: u64,
    pub corrected: u64,
}

impl EnsembleSummary {
    pub fn correct_rate(&self) -> f64 {
        self.correct_verdicts as f64 / self.trials as f64
    }
}

fn db_with_stderr(e: &Estimate) -> Result<(f64, f64)> {
    let db = relative_power_db(e.mean)?;
    // d(10·log10 v)/dv = 10/(v ln 10)
    let stderr = 10.0 / (e.mean * std::f64::consts::LN_10) * e.stderr;
    Ok((db, stderr))
}

pub fn summarize(records: &[TrialRecord], channel: Option<usize>, target: (f64, f64)) -> Result<EnsembleSummary> {
    if records.is_empty() {
        return Err(QecError::InvalidParameter("no trials to summarize".into()));
    }
    let fidelity = Estimate::from_samples(&records.iter().map(|r| r.fidelity).collect::<Vec<_>>());
    let moments: Vec<(f64, f64)> = records.iter().map(|r| r.second_moments(target)).collect();
    let power_x = Estimate::from_samples(&moments.iter().map(|m| m.0).collect::<Vec<_>>());
    let power_p = Estimate::from_samples(&moments.iter().map(|m| m.1).collect::<Vec<_>>());
    let (power_x_db, power_x_db_stderr) = db_with_stderr(&power_x)?;
    let (power_p_db, power_p_db_stderr) = db_with_stderr(&power_p)?;
    let expected = channel.map_or(Verdict::NoError, Verdict::Channel);
    let count = |f: &dyn Fn(&TrialRecord) -> bool| records.iter().filter(|r| f(r)).count() as u64;
    Ok(EnsembleSummary {
        trials: records.len() as u64,
        fidelity,
        power_x,
        power_p,
        power_x_db,
        power_x_db_stderr,
        power_p_db,
        power_p_db_stderr,
        correct_verdicts: count(&|r| r.verdict == expected),
        ambiguous: count(&|r| r.verdict == Verdict::Ambiguous),
        corrected: count(&|r| r.corrected),
    })
}
