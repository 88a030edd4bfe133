//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use cvqec::montecarlo::trial_rng;
use cvqec::network::{ledger_check, Quadrature};
use cvqec::shor9::{
    false_alarm_probability, run_ensemble, theory_fidelity, theory_output_power, CodeConfig, ErrorModel,
    FeedforwardPolicy, Verdict,
};
use cvqec::three_mode::{
    cec_vs_qec_sweep, direct_fidelity, ensemble_fidelity_mc, StochasticChannel, SweepPolicy, ThreeModeConfig,
};
use cvqec::witness::{full_report, nullifier_suite, SATISFACTION_MARGIN};
use cvqec::{GaussianState, Squeezing};
use cvqec_cli::args::Cli;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn vacuum() -> GaussianState {
    GaussianState::coherent(0.0, 0.0)
}

/// Default error of the CLI: amplitude 20 at 45 degrees.
fn error(channel: usize) -> ErrorModel {
    ErrorModel::polar(channel, 20.0, std::f64::consts::FRAC_PI_4)
}

fn mc_fidelity(channel: usize, sq: Squeezing, trials: u64) -> cvqec::montecarlo::Estimate {
    let config = CodeConfig::new(sq, error(channel));
    run_ensemble(&config, &vacuum(), trials, channel as u64).expect("ensemble runs").1.fidelity
}

fn table2_theory() -> Outcome {
    // Printed theory column (x, p) per channel, dB.
    let printed = [
        (1.76, 0.67),
        (1.76, 0.87),
        (1.76, 0.87),
        (2.22, 0.67),
        (2.22, 0.87),
        (2.22, 0.87),
        (2.22, 0.67),
        (2.22, 0.87),
        (2.22, 0.87),
    ];
    let mut worst = 0.0f64;
    for (c, (x, p)) in printed.iter().enumerate() {
        let zero = Squeezing::zero();
        worst = worst.max((theory_output_power(c + 1, Quadrature::X, &zero) - x).abs());
        worst = worst.max((theory_output_power(c + 1, Quadrature::P, &zero) - p).abs());
    }
    check(worst <= 0.005, format!("max |theory - printed| = {worst:.4} dB"))
}

fn fidelity_cutoffs() -> Outcome {
    let f1 = mc_fidelity(1, Squeezing::zero(), 10_000);
    let f9 = mc_fidelity(9, Squeezing::zero(), 10_000);
    let t1 = theory_fidelity(1, &Squeezing::zero(), FeedforwardPolicy::Single);
    let t9 = theory_fidelity(9, &Squeezing::zero(), FeedforwardPolicy::Single);
    let ok = (f1.mean - 0.859).abs() <= 0.005
        && (f9.mean - 0.822).abs() <= 0.005
        && (t1 - 0.859).abs() <= 0.005
        && (t9 - 0.822).abs() <= 0.005;
    check(
        ok,
        format!(
            "ch1 MC {:.4} ± {:.4} (closed form {t1:.4}); ch9 MC {:.4} ± {:.4} (closed form {t9:.4})",
            f1.mean, f1.stderr, f9.mean, f9.stderr
        ),
    )
}

fn one_db() -> Outcome {
    let sq = Squeezing::uniform_db(1.0);
    let t1 = theory_fidelity(1, &sq, FeedforwardPolicy::Single);
    let mut ok = (t1 - 0.885).abs() <= 0.005;
    let mut detail = format!("ch1 closed form {t1:.4}");
    let mut lowest_margin = f64::INFINITY;
    for c in 1..=9 {
        let f = mc_fidelity(c, sq, 10_000);
        let theory = theory_fidelity(c, &sq, FeedforwardPolicy::Single);
        let cutoff = theory_fidelity(c, &Squeezing::zero(), FeedforwardPolicy::Single);
        if c == 1 {
            ok &= (f.mean - 0.885).abs() <= 0.005;
            detail += &format!(", MC {:.4} ± {:.4}", f.mean, f.stderr);
        }
        ok &= f.mean > cutoff && theory > cutoff;
        lowest_margin = lowest_margin.min(f.mean - cutoff);
    }
    check(ok, detail + &format!("; smallest MC margin over the r=0 cutoff across channels {lowest_margin:.4}"))
}

fn golden_coefficients() -> Outcome {
    let report = ledger_check(1e-12);
    check(
        report.is_clean(),
        format!(
            "{} terms compared, {} diffs, {} known erratum line(s)",
            report.compared,
            report.diffs.len(),
            report.errata.len()
        ),
    )
}

fn syndrome_table() -> Outcome {
    let mut worst = 1.0f64;
    for r in [0.0, 1.0] {
        for c in 1..=9 {
            let config = CodeConfig::new(Squeezing::uniform(r), error(c));
            let (_, s) = run_ensemble(&config, &vacuum(), 10_000, 100 + c as u64).expect("ensemble runs");
            worst = worst.min(s.correct_rate());
        }
    }
    let n = 100_000u64;
    let config = CodeConfig::new(Squeezing::zero(), ErrorModel::None);
    let (records, _) = run_ensemble(&config, &vacuum(), n, 7).expect("ensemble runs");
    let alarms = records.iter().filter(|r| r.verdict != Verdict::NoError).count() as f64;
    let (_, p) = false_alarm_probability(4.0);
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let rate = alarms / n as f64;
    check(
        worst >= 0.999 && (rate - p).abs() <= 3.0 * se,
        format!("lowest correct rate {worst:.4}; false-alarm rate {rate:.2e} vs tail bound {p:.2e} ± {se:.1e}"),
    )
}

fn nullifiers() -> Outcome {
    let mut rng = trial_rng(2024, 0);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let sq = Squeezing(std::array::from_fn(|_| rng.random_range(0.0..3.0)));
        for n in nullifier_suite(&sq).expect("suite runs") {
            worst = worst.max(n.abs_diff);
        }
    }
    let largest =
        nullifier_suite(&Squeezing::uniform(8.0)).expect("suite runs").iter().map(|n| n.variance).fold(0.0, f64::max);
    check(
        worst <= 1e-10 && largest < 1e-6,
        format!("max closed-form gap {worst:.1e}; max variance at r=8 {largest:.1e}"),
    )
}

fn three_mode() -> Outcome {
    let start = Instant::now();
    let ch = StochasticChannel::new(0.1, 10.0).expect("valid channel");
    let mc = ensemble_fidelity_mc(&ThreeModeConfig::new(ch, 6.0), 100_000, 1).expect("ensemble runs");
    let direct = direct_fidelity(&ch);
    let rows =
        cec_vs_qec_sweep(&[0.05, 0.1, 0.3], &[5.0, 10.0], &[0.0, 1.0, 3.0], 100_000, 1, 4.0).expect("sweep runs");
    let mc_rows: Vec<_> = rows.iter().filter(|r| r.policy == SweepPolicy::MonteCarlo).collect();
    let disagree = mc_rows.iter().filter(|r| !r.mc_exact_agree).count();
    let elapsed = start.elapsed().as_secs_f64();
    let ok = (mc.mean - 0.999).abs() <= 0.001
        && (mc.mean - (1.0 - 0.1f64.powi(3))).abs() <= 0.001
        && (direct - 0.9).abs() < 1e-12
        && disagree == 0
        && elapsed < 60.0;
    check(
        ok,
        format!(
            "MC {:.5} ± {:.1e}; direct {direct:.3}; {disagree}/{} grid points outside 3 SE; {elapsed:.1}s",
            mc.mean,
            mc.stderr,
            mc_rows.len()
        ),
    )
}

fn witnesses() -> Outcome {
    let r0 = full_report(&Squeezing::zero()).expect("report");
    let floor = r0.witnesses.iter().flat_map(|w| [w.unit.value, w.optimized.value]).fold(f64::INFINITY, f64::min);
    let r1 = full_report(&Squeezing::uniform(1.0)).expect("report");
    let intra = r1.witnesses.iter().filter(|w| w.unit.kind.to_string().starts_with("intra"));
    let target = 0.25 + (-2.0f64).exp();
    let intra_gap = intra.map(|w| (w.unit.value - target).abs()).fold(0.0, f64::max);
    let db = full_report(&Squeezing::uniform_db(1.0)).expect("report");
    let w = &db.witnesses[0];
    let ok = floor >= 1.0 - SATISFACTION_MARGIN
        && !r0.any_satisfied
        && intra_gap <= 1e-6
        && r1.all_unit_satisfied
        && r1.all_optimized_satisfied
        && (w.unit.value - 1.044).abs() <= 1e-3
        && !w.unit.satisfied
        && w.optimized.value < 1.0
        && w.optimized.satisfied;
    check(
        ok,
        format!(
            "r=0 min value {floor:.6}; r=1 intra unit {target:.6} (max gap {intra_gap:.1e}), all 8 satisfied: {}; 1 dB unit {:.4} -> optimized {:.4} (g = {:.3})",
            r1.all_optimized_satisfied, w.unit.value, w.optimized.value, w.optimized.gains[0]
        ),
    )
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 5] = [
        &["fidelity", "--trials", "2000", "--format", "csv"],
        &["fidelity", "--trials", "2000", "--squeezing-db", "1", "--policy", "optimal", "--format", "json"],
        &["syndrome", "--channel", "9", "--trials", "500", "--error-model", "random-phase", "--format", "csv"],
        &["table2", "--trials", "1000", "--format", "json"],
        &["three-mode", "--gamma", "0.1,0.3", "--xbar2", "5", "--r", "0,3", "--trials", "2000", "--format", "json"],
    ];
    let run = |args: &[&str], threads: &str| {
        let mut argv = vec!["cvqec", "--threads", threads];
        argv.extend(args);
        cvqec_cli::execute(&Cli::try_parse_from(argv).expect("valid arguments")).expect("command runs").bytes
    };
    let mut bytes = 0;
    for args in commands {
        let reference = run(args, "1");
        for threads in ["1", "2", "4"] {
            if run(args, threads) != reference {
                return Err(format!("{} differs at {threads} threads", args.join(" ")));
            }
        }
        bytes += reference.len();
    }
    Ok(format!("{} commands byte-identical at 1, 2 and 4 threads ({bytes} bytes)", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("noise-power theory column", table2_theory),
        ("unsqueezed fidelity cutoffs", fidelity_cutoffs),
        ("1 dB fidelity", one_db),
        ("printed coefficients", golden_coefficients),
        ("syndrome table", syndrome_table),
        ("nullifier suite", nullifiers),
        ("three-mode code", three_mode),
        ("witness suite", witnesses),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
