use cvqec::three_mode::{
    classify3, decoded_signature, direct_fidelity, ensemble_fidelity_exact, ensemble_fidelity_mc, high_squeezing_limit,
    StochasticChannel, Support, ThreeModeConfig,
};
use proptest::prelude::*;

#[test]
fn monte_carlo_agrees_with_exact() {
    for (gamma, xbar2, r) in [(0.3, 5.0, 1.0), (0.1, 10.0, 0.0), (0.05, 5.0, 3.0)] {
        let c = ThreeModeConfig::new(StochasticChannel::new(gamma, xbar2).unwrap(), r);
        let exact = ensemble_fidelity_exact(&c).unwrap();
        let mc = ensemble_fidelity_mc(&c, 40000, 9).unwrap();
        assert!(mc.z_score(exact).abs() <= 3.0, "({gamma}, {xbar2}, {r}): {mc:?} vs {exact}");
    }
}

#[test]
fn reference_fidelities() {
    let ch = StochasticChannel::new(0.1, 10.0).unwrap();
    assert!((direct_fidelity(&ch) - 0.9).abs() < 1e-12);
    assert!((high_squeezing_limit(&ch) - (1.0 - 0.1f64.powi(3))).abs() < 1e-12);
}

#[test]
fn exact_fidelity_grows_with_squeezing() {
    let ch = StochasticChannel::new(0.1, 5.0).unwrap();
    let f: Vec<f64> =
        [0.0, 1.0, 3.0, 6.0].iter().map(|&r| ensemble_fidelity_exact(&ThreeModeConfig::new(ch, r)).unwrap()).collect();
    assert!(f.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{f:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Noise-free signatures of every correctable support land on their own
    /// table entry, whatever the error size.
    #[test]
    fn signatures_classify_to_their_support(xbar2 in 0.5f64..20.0, r in 0.0f64..6.0, bits in 0u8..7) {
        let s = Support(bits);
        let (_, u) = decoded_signature(s);
        prop_assert_eq!(classify3(u[0] * xbar2, u[1] * xbar2, r, xbar2, 4.0), Some(s));
    }
}
