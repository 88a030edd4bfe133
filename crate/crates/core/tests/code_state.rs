use cvqec::phase_space::SqueezeAxis;
use cvqec::shor9::{decode9, encode9};
use cvqec::{GaussianState, Squeezing};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decode_inverts_encode(x in -5.0f64..5.0, p in -5.0f64..5.0, r in prop::array::uniform8(0.0f64..2.0)) {
        let sq = Squeezing(r);
        let input = GaussianState::coherent(x, p);
        let out = decode9(&encode9(&input, &sq).unwrap()).unwrap();
        let (mx, mp) = out.mode_mean(0);
        prop_assert!((mx - x).abs() < 1e-10 && (mp - p).abs() < 1e-10);
        let c = out.mode_cov(0);
        prop_assert!((c[0][0] - 0.25).abs() < 1e-10 && (c[1][1] - 0.25).abs() < 1e-10 && c[0][1].abs() < 1e-10);
        // Mode 1 decouples from the ancillas.
        for j in 2..18 {
            prop_assert!(out.cov()[(0, j)].abs() < 1e-10 && out.cov()[(1, j)].abs() < 1e-10);
        }
    }

    #[test]
    fn encoded_state_is_physical(r in prop::array::uniform8(0.0f64..3.0)) {
        let s = encode9(&GaussianState::squeezed(0.3, SqueezeAxis::P).unwrap(), &Squeezing(r)).unwrap();
        s.check_physical().unwrap();
        for nu in s.symplectic_eigenvalues().unwrap() {
            prop_assert!((nu - 0.25).abs() < 1e-9, "pure state eigenvalue {}", nu);
        }
    }
}
