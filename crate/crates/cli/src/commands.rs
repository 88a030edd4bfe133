use cvqec::network::{ledger_check, DiffKind, LedgerDiff, Quadrature};
use cvqec::shor9::{
    run_ensemble, theory_fidelity, theory_output_power, theory_output_variance, EnsembleSummary, FeedforwardPlan,
    FeedforwardPolicy, TrialRecord,
};
use cvqec::three_mode::{cec_vs_qec_sweep, high_squeezing_limit, StochasticChannel, SweepPolicy, SweepRow};
use cvqec::units::relative_power_db;
use cvqec::witness::full_report;
use cvqec::{GaussianState, Squeezing};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::Report;

/// Tolerance for comparing computed and printed network coefficients.
pub const LEDGER_TOLERANCE: f64 = 1e-12;

/// Largest allowed gap between a nullifier variance and its closed form.
const NULLIFIER_TOLERANCE: f64 = 1e-9;

fn vacuum() -> GaussianState {
    GaussianState::coherent(0.0, 0.0)
}

fn ensemble(cfg: &RunConfig, channel: usize) -> CliResult<(Vec<TrialRecord>, EnsembleSummary)> {
    Ok(run_ensemble(&cfg.code_config(channel), &vacuum(), cfg.trials, cfg.channel_seed(channel))?)
}

fn quadratures() -> [(Quadrature, &'static str); 2] {
    [(Quadrature::X, "x"), (Quadrature::P, "p")]
}

#[derive(Debug, Serialize)]
struct Table2Row {
    channel: usize,
    quadrature: &'static str,
    /// Closed form with unsqueezed ancillas and the single-detector policy.
    theory_r0_db: f64,
    /// Closed form at the configured squeezing and policy.
    theory_db: Option<f64>,
    mc_db: Option<f64>,
    mc_stderr_db: Option<f64>,
    /// Monte Carlo second moment minus closed form, in standard errors.
    mc_z: Option<f64>,
    trials: u64,
}

pub fn table2(cfg: &RunConfig) -> CliResult<Report> {
    let sq = cfg.squeezing();
    let mut rows = Vec::new();
    for c in cfg.channels() {
        let mc = if cfg.trials > 0 { Some(ensemble(cfg, c)?.1) } else { None };
        for (q, label) in quadratures() {
            let variance = cfg.correct.then(|| theory_output_variance(c, q, &sq, cfg.policy));
            let (est, db, db_err) = match (&mc, q) {
                (Some(s), Quadrature::X) => (Some(s.power_x), Some(s.power_x_db), Some(s.power_x_db_stderr)),
                (Some(s), Quadrature::P) => (Some(s.power_p), Some(s.power_p_db), Some(s.power_p_db_stderr)),
                (None, _) => (None, None, None),
            };
            rows.push(Table2Row {
                channel: c,
                quadrature: label,
                theory_r0_db: theory_output_power(c, q, &Squeezing::zero()),
                theory_db: variance.map(relative_power_db).transpose()?,
                mc_db: db,
                mc_stderr_db: db_err,
                mc_z: est.zip(variance).map(|(e, v)| e.z_score(v)),
                trials: cfg.trials,
            });
        }
    }
    Ok(Report::new(&rows, &rows)?.note("noise power of corrected mode 1 relative to shot noise, dB"))
}

#[derive(Debug, Serialize)]
struct ChannelSummary {
    channel: usize,
    trials: u64,
    correct_rate: f64,
    ambiguous: u64,
    /// Fraction of trials in which each detector crossed its threshold.
    active_rate: [f64; 8],
}

fn channel_summary(cfg: &RunConfig, channel: usize, records: &[TrialRecord], s: &EnsembleSummary) -> ChannelSummary {
    let thresholds = FeedforwardPlan::new(&cfg.code_config(channel)).thresholds;
    let mut active_rate = [0.0; 8];
    for r in records {
        for (d, o) in r.syndrome().iter().enumerate() {
            if o.abs() > thresholds[d] {
                active_rate[d] += 1.0;
            }
        }
    }
    ChannelSummary {
        channel,
        trials: s.trials,
        correct_rate: s.correct_rate(),
        ambiguous: s.ambiguous,
        active_rate: active_rate.map(|n| n / records.len() as f64),
    }
}

pub fn syndrome(cfg: &RunConfig) -> CliResult<Report> {
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    for c in cfg.channels() {
        let (recs, s) = ensemble(cfg, c)?;
        summaries.push(channel_summary(cfg, c, &recs, &s));
        records.extend(recs);
    }
    let notes: Vec<String> = summaries
        .iter()
        .map(|s| {
            let pattern: Vec<String> = s.active_rate.iter().map(|a| format!("{a:.3}")).collect();
            format!("channel {}: correct {:.4}, detector activity [{}]", s.channel, s.correct_rate, pattern.join(" "))
        })
        .collect();
    #[derive(Serialize)]
    struct Out<'a> {
        summaries: &'a [ChannelSummary],
        records: &'a [TrialRecord],
    }
    let mut report = Report::new(&records, &Out { summaries: &summaries, records: &records })?;
    report.notes = notes;
    Ok(report)
}

#[derive(Debug, Serialize)]
struct FidelityRow {
    channel: usize,
    /// Closed form with unsqueezed ancillas: the cutoff to beat.
    theory_r0: f64,
    theory: Option<f64>,
    mc: Option<f64>,
    mc_stderr: Option<f64>,
    correct_rate: Option<f64>,
    exceeds_r0: bool,
}

pub fn fidelity(cfg: &RunConfig) -> CliResult<Report> {
    let sq = cfg.squeezing();
    let mut rows = Vec::new();
    for c in cfg.channels() {
        let theory_r0 = theory_fidelity(c, &Squeezing::zero(), FeedforwardPolicy::Single);
        let theory = cfg.correct.then(|| theory_fidelity(c, &sq, cfg.policy));
        let mc = if cfg.trials > 0 { Some(ensemble(cfg, c)?.1) } else { None };
        let best = mc.as_ref().map(|s| s.fidelity.mean).or(theory).unwrap_or(0.0);
        rows.push(FidelityRow {
            channel: c,
            theory_r0,
            theory,
            mc: mc.as_ref().map(|s| s.fidelity.mean),
            mc_stderr: mc.as_ref().map(|s| s.fidelity.stderr),
            correct_rate: mc.as_ref().map(|s| s.correct_rate()),
            exceeds_r0: best > theory_r0,
        });
    }
    Report::new(&rows, &rows)
}

pub fn trial(cfg: &RunConfig) -> CliResult<Report> {
    let channel = cfg.channel.unwrap_or(1);
    let (records, summary) = ensemble(cfg, channel)?;
    #[derive(Serialize)]
    struct Out<'a> {
        summary: &'a EnsembleSummary,
        records: &'a [TrialRecord],
    }
    let f = summary.fidelity;
    Ok(Report::new(&records, &Out { summary: &summary, records: &records })?.note(format!(
        "channel {channel}: fidelity {:.5} ± {:.5}, power x {:.3} dB, power p {:.3} dB, correct {:.4}",
        f.mean,
        f.stderr,
        summary.power_x_db,
        summary.power_p_db,
        summary.correct_rate()
    )))
}

#[derive(Debug, Serialize)]
struct ThreeModeRow {
    gamma: f64,
    xbar2: f64,
    r: f64,
    policy: SweepPolicy,
    fidelity: f64,
    stderr: f64,
    trials: u64,
    seed: u64,
    mc_exact_agree: bool,
    /// Infinite-squeezing fidelity `1 − γ³(1 − e^{−3x̄2²})`.
    high_squeezing_limit: f64,
}

impl From<SweepRow> for ThreeModeRow {
    fn from(r: SweepRow) -> Self {
        let ch = StochasticChannel { gamma: r.gamma, xbar2: r.xbar2 };
        ThreeModeRow {
            gamma: r.gamma,
            xbar2: r.xbar2,
            r: r.r,
            policy: r.policy,
            fidelity: r.fidelity,
            stderr: r.stderr,
            trials: r.trials,
            seed: r.seed,
            mc_exact_agree: r.mc_exact_agree,
            high_squeezing_limit: high_squeezing_limit(&ch),
        }
    }
}

pub fn three_mode(cfg: &RunConfig) -> CliResult<Report> {
    let grid = cfg.three_mode.as_ref().expect("three-mode command carries its grid");
    let rows: Vec<ThreeModeRow> =
        cec_vs_qec_sweep(&grid.gamma, &grid.xbar2, &grid.r, cfg.trials, cfg.seed, cfg.threshold_sigma)?
            .into_iter()
            .map(ThreeModeRow::from)
            .collect();
    let disagree = rows.iter().filter(|r| r.policy == SweepPolicy::MonteCarlo && !r.mc_exact_agree).count();
    let agree_note = if cfg.trials > 0 {
        format!("{disagree} grid point(s) with Monte Carlo and exact more than 3 standard errors apart")
    } else {
        "exact evaluator only".to_string()
    };
    Ok(Report::new(&rows, &rows)?.note(agree_note))
}

#[derive(Debug, Serialize)]
struct WitnessRow {
    witness: String,
    unit_value: f64,
    unit_satisfied: bool,
    optimized_value: f64,
    optimized_satisfied: bool,
    /// Optimized gains, `;`-separated in slot order.
    gains: String,
    fallback: bool,
}

pub fn witness(cfg: &RunConfig) -> CliResult<Report> {
    let report = full_report(&cfg.squeezing())?;
    let rows: Vec<WitnessRow> = report
        .witnesses
        .iter()
        .map(|w| WitnessRow {
            witness: w.unit.kind.to_string(),
            unit_value: w.unit.value,
            unit_satisfied: w.unit.satisfied,
            optimized_value: w.optimized.value,
            optimized_satisfied: w.optimized.satisfied,
            gains: w.optimized.gains.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";"),
            fallback: w.optimized.fallback,
        })
        .collect();
    let mut out = Report::new(&rows, &report)?;
    out = out.note(format!("logical variances: X {} P {}", report.logical_x_variance, report.logical_p_variance));
    for (label, v) in &report.triplet_sums {
        out = out.note(format!("Var({label}) = {v}"));
    }
    for n in &report.nullifiers {
        out = out.note(format!("Var({}) = {} (closed form {})", n.label, n.variance, n.closed_form));
    }
    if let Some(n) = report.nullifiers.iter().find(|n| n.abs_diff > NULLIFIER_TOLERANCE) {
        out.violation = Some(format!("nullifier {} off its closed form by {}", n.label, n.abs_diff));
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct LedgerRow<'a> {
    status: &'static str,
    section: &'static str,
    line: &'a str,
    symbol: &'a str,
    kind: DiffKind,
    printed: f64,
    computed: f64,
    note: Option<&'a str>,
}

impl<'a> LedgerRow<'a> {
    fn new(status: &'static str, d: &'a LedgerDiff) -> Self {
        LedgerRow {
            status,
            section: d.section,
            line: &d.line,
            symbol: &d.symbol,
            kind: d.kind,
            printed: d.printed,
            computed: d.computed,
            note: d.note.as_deref(),
        }
    }
}

pub fn ledger(_cfg: &RunConfig) -> CliResult<Report> {
    let report = ledger_check(LEDGER_TOLERANCE);
    let rows: Vec<LedgerRow> = report
        .diffs
        .iter()
        .map(|d| LedgerRow::new("diff", d))
        .chain(report.errata.iter().map(|d| LedgerRow::new("erratum", d)))
        .collect();
    let mut out = Report::new(&rows, &report)?.note(format!(
        "compared {} printed terms: {} diff(s), {} known erratum line(s)",
        report.compared,
        report.diffs.len(),
        report.errata.len()
    ));
    if !report.is_clean() {
        out.violation = Some(format!("{} coefficient(s) differ from the printed forms", report.diffs.len()));
    }
    Ok(out)
}
