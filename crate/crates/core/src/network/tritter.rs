use std::f64::consts::FRAC_1_SQRT_2;

use crate::phase_space::ModeMatrix;

/// The tritter: input port 0 is split equally over three outputs, ports 1
/// and 2 fill the orthogonal complement.
///
/// ```text
/// [ 1/√3   √(2/3)    0    ]
/// [ 1/√3  -1/√6    1/√2   ]
/// [ 1/√3  -1/√6   -1/√2   ]
/// ```
pub fn tritter() -> ModeMatrix {
    let a = 1.0 / 3f64.sqrt();
    let b = (2.0f64 / 3.0).sqrt();
    let c = 1.0 / 6f64.sqrt();
    ModeMatrix::from_rows(&[&[a, b, 0.0], &[a, -c, FRAC_1_SQRT_2], &[a, -c, -FRAC_1_SQRT_2]])
        .expect("tritter is orthogonal")
}

/// Real beam splitter with power transmittance `t` on the first port:
/// `[[√t, √(1-t)], [√(1-t), -√t]]`.
pub fn splitter(transmittance: f64) -> ModeMatrix {
    let t = transmittance.sqrt();
    let r = (1.0 - transmittance).sqrt();
    ModeMatrix::from_rows(&[&[t, r], &[r, -t]]).expect("splitter is orthogonal")
}

/// The same tritter assembled from a 1:2 splitter on ports (0, 1) followed
/// by a 1:1 splitter on ports (1, 2).
pub fn tritter_from_splitters() -> ModeMatrix {
    let first = splitter(1.0 / 3.0).embed(3, &[0, 1]).expect("valid ports");
    let second = splitter(0.5).embed(3, &[1, 2]).expect("valid ports");
    second.compose(&first).expect("same dimension")
}

/// Tritter placements of the nine-mode encoder in application order, in the
/// output mode labelling (0-based): first `T_147` on the signal and the two
/// x-squeezed ancillas, then `T_123`, `T_456`, `T_789`.
pub const ENCODER_STAGES: [[usize; 3]; 4] = [[0, 3, 6], [0, 1, 2], [3, 4, 5], [6, 7, 8]];

pub fn build_encoder_matrix() -> ModeMatrix {
    let t = tritter();
    let mut total = ModeMatrix::identity(9);
    for stage in ENCODER_STAGES {
        let embedded = t.embed(9, &stage).expect("valid stage");
        total = embedded.compose(&total).expect("same dimension");
    }
    total
}

pub fn build_decoder_matrix() -> ModeMatrix {
    build_encoder_matrix().inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn tritter_matches_splitter_cascade() {
        let diff = (tritter().matrix() - tritter_from_splitters().matrix()).amax();
        assert!(diff < 1e-15, "{diff}");
    }

    #[test]
    fn encoder_is_orthogonal_and_inverted_by_decoder() {
        let e = build_encoder_matrix();
        let d = build_decoder_matrix();
        let id = d.compose(&e).unwrap();
        assert!((id.matrix() - DMatrix::<f64>::identity(9, 9)).amax() < 1e-12);
        let gram = e.matrix().transpose() * e.matrix();
        assert!((gram - DMatrix::<f64>::identity(9, 9)).amax() < 1e-12);
    }

    #[test]
    fn encoder_first_row() {
        // x1 = x_in/3 + (√2/3) an1 + √(2/3) an2; an1 sits in column 3, an2 in column 1.
        let e = build_encoder_matrix();
        assert!((e.get(0, 0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.get(0, 1) - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(e.get(0, 2).abs() < 1e-15);
        assert!((e.get(0, 3) - 2f64.sqrt() / 3.0).abs() < 1e-15);
        for col in 4..9 {
            assert!(e.get(0, col).abs() < 1e-15);
        }
    }
}
