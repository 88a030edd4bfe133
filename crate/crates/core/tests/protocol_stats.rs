use cvqec::network::Quadrature;
use cvqec::shor9::{
    false_alarm_probability, run_ensemble, theory_fidelity, theory_output_variance, CodeConfig, ErrorModel,
    FeedforwardPolicy, Verdict,
};
use cvqec::{GaussianState, Squeezing};
use proptest::prelude::*;

fn vacuum() -> GaussianState {
    GaussianState::coherent(0.0, 0.0)
}

#[test]
fn every_channel_is_located() {
    for r in [0.0, 1.0] {
        for channel in 1..=9 {
            let error = ErrorModel::polar(channel, 20.0, std::f64::consts::FRAC_PI_4);
            let config = CodeConfig::new(Squeezing::uniform(r), error);
            let (_, s) = run_ensemble(&config, &vacuum(), 2000, 11).unwrap();
            assert!(s.correct_rate() >= 0.999, "channel {channel}, r={r}: {}", s.correct_rate());
        }
    }
}

#[test]
fn false_alarm_rate_matches_tail_bound() {
    let config = CodeConfig::new(Squeezing::zero(), ErrorModel::None);
    let n = 20000;
    let (records, _) = run_ensemble(&config, &vacuum(), n, 5).unwrap();
    let alarms = records.iter().filter(|r| r.verdict != Verdict::NoError).count() as f64;
    let (_, p) = false_alarm_probability(4.0);
    let stderr = (p * (1.0 - p) / n as f64).sqrt();
    let rate = alarms / n as f64;
    assert!((rate - p).abs() <= 3.0 * stderr, "rate {rate} vs {p} ± {stderr}");
}

#[test]
fn monte_carlo_matches_closed_form_variances() {
    for r in [0.0, 0.5] {
        for channel in [1, 2, 5, 9] {
            let error = ErrorModel::Fixed { channel, dx: 14.0, dp: -14.0 };
            let sq = Squeezing::uniform(r);
            let (_, s) = run_ensemble(&CodeConfig::new(sq, error), &vacuum(), 4000, 3).unwrap();
            for (q, est) in [(Quadrature::X, &s.power_x), (Quadrature::P, &s.power_p)] {
                let want = theory_output_variance(channel, q, &sq, FeedforwardPolicy::Single);
                assert!(
                    est.z_score(want).abs() < 3.0,
                    "ch{channel} {q:?} r={r}: {} ± {} vs {want}",
                    est.mean,
                    est.stderr
                );
            }
            let f = theory_fidelity(channel, &sq, FeedforwardPolicy::Single);
            assert!(s.fidelity.z_score(f).abs() < 3.0, "ch{channel} r={r}: fidelity {:?} vs {f}", s.fidelity);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fidelity_grows_with_squeezing(r in 0.0f64..3.0, dr in 0.0f64..1.0, channel in 1usize..=9) {
        for policy in [FeedforwardPolicy::Single, FeedforwardPolicy::Optimal] {
            let a = theory_fidelity(channel, &Squeezing::uniform(r), policy);
            let b = theory_fidelity(channel, &Squeezing::uniform(r + dr), policy);
            prop_assert!(b >= a - 1e-12);
        }
    }
}
