use cvqec::network::Quadrature;
use cvqec::witness::{
    combination_variance, evaluate_witness, ledger_variance, logical_quadrature_variances, nullifier_suite,
    optimize_gains, triplet_sum_combinations, triplet_sum_variances, vacuum_code_state, Combination, WitnessKind,
    SATISFACTION_MARGIN,
};
use cvqec::Squeezing;
use proptest::prelude::*;

fn unit(kind: WitnessKind) -> Vec<f64> {
    vec![1.0; kind.n_gains()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nullifiers_match_closed_forms(r in prop::array::uniform8(0.0f64..3.0)) {
        for n in nullifier_suite(&Squeezing(r)).unwrap() {
            prop_assert!(n.abs_diff < 1e-10, "{:?}", n);
        }
    }

    #[test]
    fn state_and_ledger_variances_agree(r in prop::array::uniform8(0.0f64..2.0), xc in prop::array::uniform9(-2.0f64..2.0), pc in prop::array::uniform9(-2.0f64..2.0)) {
        let sq = Squeezing(r);
        let comb = Combination { xc, pc };
        let state = vacuum_code_state(&sq).unwrap();
        let a = combination_variance(&state, &comb).unwrap();
        prop_assert!((a - ledger_variance(&comb, &sq)).abs() < 1e-10);
    }

    #[test]
    fn unit_gain_witnesses_do_not_increase_with_squeezing(r in 0.0f64..2.5, dr in 0.0f64..1.0) {
        let lo = vacuum_code_state(&Squeezing::uniform(r)).unwrap();
        let hi = vacuum_code_state(&Squeezing::uniform(r + dr)).unwrap();
        for kind in WitnessKind::all() {
            let a = evaluate_witness(&lo, kind, &unit(kind)).unwrap().value;
            let b = evaluate_witness(&hi, kind, &unit(kind)).unwrap().value;
            prop_assert!(b <= a + 1e-12, "{kind}: {a} -> {b}");
        }
    }

    #[test]
    fn separable_state_never_violates(gains in prop::collection::vec(-3.0f64..3.0, 5)) {
        let s = vacuum_code_state(&Squeezing::zero()).unwrap();
        for kind in WitnessKind::all() {
            let w = evaluate_witness(&s, kind, &gains[..kind.n_gains()]).unwrap();
            prop_assert!(w.value >= 1.0 - SATISFACTION_MARGIN && !w.satisfied, "{:?}", w);
        }
    }
}

#[test]
fn nullifiers_vanish_at_large_squeezing() {
    for n in nullifier_suite(&Squeezing::uniform(8.0)).unwrap() {
        assert!(n.variance < 1e-6, "{n:?}");
    }
}

#[test]
fn zero_squeezing_reference_variances() {
    let s = vacuum_code_state(&Squeezing::zero()).unwrap();
    let p12 = Combination::from_weights(Quadrature::P, [1, -1, 0, 0, 0, 0, 0, 0, 0]);
    assert!((combination_variance(&s, &p12).unwrap() - 0.5).abs() < 1e-12);
    let x = Combination::from_weights(Quadrature::X, [0, 0, 0, 1, 1, 1, -1, -1, -1]);
    assert!((combination_variance(&s, &x).unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn logical_variances() {
    for r in [0.0, 0.5, 1.3] {
        let (vx, vp) = logical_quadrature_variances(&Squeezing::uniform(r)).unwrap();
        let e = (-2.0 * r).exp();
        assert!((vx - (0.25 + 0.5 * e)).abs() < 1e-12);
        // Three ancilla terms with coefficient √(2/3).
        assert!((vp - (0.25 + 3.0 * (2.0 / 3.0) * 0.25 * e)).abs() < 1e-12);
    }
    let (vx, vp) = logical_quadrature_variances(&Squeezing::uniform(10.0)).unwrap();
    assert!((vx - 0.25).abs() < 1e-8 && (vp - 0.25).abs() < 1e-8);
}

#[test]
fn triplet_sums() {
    let sq = Squeezing::from_db([0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
    let e = |k: usize| 0.25 * (-2.0 * sq.get(k)).exp();
    // Coefficient squares of the printed forms: x sums carry 1/2 on an1 and
    // 3/2 on an4; p sums carry 1/6 on an2, an5, an7 and 1/2 on an3, an6, an8.
    let x_sum = 0.25 + 0.5 * e(1) + 1.5 * e(4);
    let p_sum = 0.25 + (e(2) + e(5) + e(7)) / 6.0 + 0.5 * (e(3) + e(6) + e(8));
    let got = triplet_sum_variances(&sq).unwrap();
    for ((label, v), want) in got.iter().zip([x_sum, x_sum, p_sum, p_sum]) {
        assert!((v - want).abs() < 1e-12, "{label}: {v} vs {want}");
    }
    let z = triplet_sum_variances(&Squeezing::zero()).unwrap();
    assert!((z[2].1 - 0.75).abs() < 1e-12);
    for (label, v) in triplet_sum_variances(&Squeezing::uniform(8.0)).unwrap() {
        assert!((v - 0.25).abs() < 1e-6, "{label}");
    }
    assert_eq!(triplet_sum_combinations().len(), 4);
}

#[test]
fn optimizer_dominates_unit_gains() {
    for r in [0.0, 0.1151, 0.5, 1.0] {
        let s = vacuum_code_state(&Squeezing::uniform(r)).unwrap();
        for kind in WitnessKind::all() {
            let u = evaluate_witness(&s, kind, &unit(kind)).unwrap();
            let o = optimize_gains(&s, kind).unwrap();
            assert!(o.value <= u.value + 1e-12, "{kind} at r={r}");
            assert!(!o.fallback);
        }
    }
}

#[test]
fn optimized_gains_approach_unity() {
    let s = vacuum_code_state(&Squeezing::uniform(8.0)).unwrap();
    for kind in WitnessKind::all() {
        let o = optimize_gains(&s, kind).unwrap();
        for g in &o.gains {
            assert!((g - 1.0).abs() < 1e-3, "{kind}: {:?}", o.gains);
        }
    }
}
