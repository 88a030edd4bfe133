use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use super::config::ErrorModel;
use crate::error::{QecError, Result};
use crate::network::{ancilla_axis, build_decoder_matrix, build_encoder_matrix, mode_source, ModeSource, Quadrature};
use crate::phase_space::{GaussianState, QuadratureTarget};
use crate::units::Squeezing;

/// Decoded mode (1-based) and quadrature read by detectors 1..=8.
pub const DETECTORS: [(usize, Quadrature); 8] = [
    (4, Quadrature::X),
    (2, Quadrature::P),
    (3, Quadrature::P),
    (7, Quadrature::X),
    (5, Quadrature::P),
    (6, Quadrature::P),
    (8, Quadrature::P),
    (9, Quadrature::P),
];

/// Detector labels in the order they are read out.
pub const MEASUREMENT_ORDER: [usize; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEvent {
    pub channel: usize,
    pub dx: f64,
    pub dp: f64,
}

/// Outcomes of detectors 1..=8 (index = label − 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Syndrome {
    pub outcomes: [f64; 8],
}

impl Syndrome {
    /// Outcome of detector `label` (1..=8).
    pub fn get(&self, label: usize) -> f64 {
        self.outcomes[label - 1]
    }
}

fn expect_modes(state: &GaussianState, n: usize) -> Result<()> {
    if state.n_modes() != n {
        return Err(QecError::DimensionMismatch { expected: n, actual: state.n_modes() });
    }
    Ok(())
}

/// Feeds the one-mode `input` and the eight ancillas through the encoder.
pub fn encode9(input: &GaussianState, squeezing: &Squeezing) -> Result<GaussianState> {
    expect_modes(input, 1)?;
    squeezing.validate()?;
    let mut modes = Vec::with_capacity(9);
    for m in 0..9 {
        modes.push(match mode_source(m) {
            ModeSource::Input => input.clone(),
            ModeSource::Ancilla(k) => GaussianState::squeezed(squeezing.get(k), ancilla_axis(k))?,
        });
    }
    let all: Vec<usize> = (0..9).collect();
    GaussianState::tensor(&modes)?.apply_mode_matrix(&build_encoder_matrix(), &all)
}

pub fn inject_error<R: Rng + ?Sized>(
    state: &GaussianState,
    model: &ErrorModel,
    rng: &mut R,
) -> Result<(GaussianState, Option<ErrorEvent>)> {
    let event = match *model {
        ErrorModel::None => return Ok((state.clone(), None)),
        ErrorModel::Fixed { channel, dx, dp } => ErrorEvent { channel, dx, dp },
        ErrorModel::RandomPhase { channel, amplitude } => {
            let theta = rng.random::<f64>() * TAU;
            ErrorEvent { channel, dx: amplitude * theta.cos(), dp: amplitude * theta.sin() }
        }
    };
    if !(1..=state.n_modes()).contains(&event.channel) {
        return Err(QecError::ModeOutOfRange { mode: event.channel - 1, n_modes: state.n_modes() });
    }
    Ok((state.displace(event.channel - 1, event.dx, event.dp)?, Some(event)))
}

pub fn decode9(state: &GaussianState) -> Result<GaussianState> {
    expect_modes(state, 9)?;
    let all: Vec<usize> = (0..9).collect();
    state.apply_mode_matrix(&build_decoder_matrix(), &all)
}

fn detector_target(label: usize, remaining: &[usize]) -> QuadratureTarget {
    let (mode, q) = DETECTORS[label - 1];
    let index = remaining.iter().position(|&m| m == mode).expect("detector mode not yet measured");
    match q {
        Quadrature::X => QuadratureTarget::x(index),
        Quadrature::P => QuadratureTarget::p(index),
    }
}

/// Samples all eight detectors in [`MEASUREMENT_ORDER`] and returns the
/// syndrome with decoded mode 1 conditioned on it.
pub fn measure_syndrome<R: Rng + ?Sized>(state: &GaussianState, rng: &mut R) -> Result<(Syndrome, GaussianState)> {
    expect_modes(state, 9)?;
    let mut remaining: Vec<usize> = (1..=9).collect();
    let mut current = state.clone();
    let mut outcomes = [0.0; 8];
    for label in MEASUREMENT_ORDER {
        let target = detector_target(label, &remaining);
        let (outcome, rest) = current.homodyne_sample(target, rng)?;
        outcomes[label - 1] = outcome;
        remaining.remove(target.mode);
        current = rest.expect("mode 1 is never measured");
    }
    Ok((Syndrome { outcomes }, current))
}

/// Conditions decoded mode 1 on given detector outcomes, measuring in
/// `order` (a permutation of 1..=8).
pub fn condition_on_outcomes(state: &GaussianState, syndrome: &Syndrome, order: &[usize]) -> Result<GaussianState> {
    expect_modes(state, 9)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != MEASUREMENT_ORDER {
        return Err(QecError::InvalidParameter("measurement order must be a permutation of 1..=8".into()));
    }
    let mut remaining: Vec<usize> = (1..=9).collect();
    let mut current = state.clone();
    for &label in order {
        let target = detector_target(label, &remaining);
        current = current.homodyne_condition(target, syndrome.get(label))?.expect("mode 1 is never measured");
        remaining.remove(target.mode);
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::trial_rng;
    use crate::network::fixture::DETECTOR_READOUTS;

    #[test]
    fn detector_map_matches_printed_list() {
        assert_eq!(DETECTORS, DETECTOR_READOUTS);
    }

    #[test]
    fn vacuum_encodes_to_vacuum() {
        let s = encode9(&GaussianState::vacuum(1).unwrap(), &Squeezing::zero()).unwrap();
        let v = GaussianState::vacuum(9).unwrap();
        assert!((s.cov() - v.cov()).amax() < 1e-12);
        assert!(s.mean().amax() < 1e-15);
    }

    #[test]
    fn p1_minus_p2_variance_at_zero_squeezing() {
        let s = encode9(&GaussianState::vacuum(1).unwrap(), &Squeezing::zero()).unwrap();
        let mut c = vec![0.0; 18];
        c[1] = 1.0;
        c[3] = -1.0;
        assert!((s.linear_variance(&c).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn round_trip_restores_input() {
        let input =
            GaussianState::squeezed(0.3, crate::phase_space::SqueezeAxis::P).unwrap().displace(0, 1.5, -0.5).unwrap();
        let sq = Squeezing([0.1, 0.5, 0.9, 1.3, 0.2, 0.0, 1.1, 0.7]);
        let decoded = decode9(&encode9(&input, &sq).unwrap()).unwrap();
        let m1 = decoded.reduced(&[0]).unwrap();
        assert!((m1.cov() - input.cov()).amax() < 1e-10);
        assert!((m1.mean() - input.mean()).amax() < 1e-10);
    }

    #[test]
    fn decoded_error_shifts() {
        let vac = GaussianState::vacuum(1).unwrap();
        let enc = encode9(&vac, &Squeezing::zero()).unwrap();
        let mut rng = trial_rng(0, 0);
        let (err, _) = inject_error(&enc, &ErrorModel::Fixed { channel: 1, dx: 3.0, dp: 0.0 }, &mut rng).unwrap();
        let d = decode9(&err).unwrap();
        assert!((d.mode_mean(0).0 - 1.0).abs() < 1e-12);
        let (err, _) = inject_error(&enc, &ErrorModel::Fixed { channel: 9, dx: 3.0, dp: 0.0 }, &mut rng).unwrap();
        let d = decode9(&err).unwrap();
        assert!((d.mode_mean(6).0 + 3.0 / 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn random_phase_has_fixed_magnitude() {
        let vac = GaussianState::vacuum(9).unwrap();
        let model = ErrorModel::RandomPhase { channel: 4, amplitude: 5.0 };
        let mut rng = trial_rng(3, 0);
        let mut sum_dx = 0.0;
        let n = 10_000;
        for _ in 0..n {
            let (_, e) = inject_error(&vac, &model, &mut rng).unwrap();
            let e = e.unwrap();
            assert!((e.dx * e.dx + e.dp * e.dp - 25.0).abs() < 1e-10);
            sum_dx += e.dx;
        }
        // dx has standard deviation 5/√2 per draw.
        let se = 5.0 / 2f64.sqrt() / (n as f64).sqrt();
        assert!((sum_dx / n as f64).abs() < 3.0 * se);
    }

    #[test]
    fn no_error_model_is_identity() {
        let vac = GaussianState::vacuum(9).unwrap();
        let (s, e) = inject_error(&vac, &ErrorModel::None, &mut trial_rng(0, 0)).unwrap();
        assert!(e.is_none());
        assert_eq!(s, vac);
    }

    #[test]
    fn syndrome_means_for_channel_one() {
        let vac = GaussianState::vacuum(1).unwrap();
        let enc = encode9(&vac, &Squeezing::zero()).unwrap();
        let (err, _) =
            inject_error(&enc, &ErrorModel::Fixed { channel: 1, dx: 5.0, dp: 5.0 }, &mut trial_rng(0, 0)).unwrap();
        let d = decode9(&err).unwrap();
        let expect = (2.0f64 / 3.0).sqrt() * 5.0;
        let means: Vec<f64> = DETECTORS
            .iter()
            .map(|&(m, q)| if q == Quadrature::X { d.mode_mean(m - 1).0 } else { d.mode_mean(m - 1).1 })
            .collect();
        // det1 reads x4' = ... + (√2/3)·dx
        assert!((means[0] - 2f64.sqrt() / 3.0 * 5.0).abs() < 1e-12);
        assert!((means[1] - expect).abs() < 1e-12);
        for m in &means[2..] {
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn conditioning_is_order_independent() {
        let input = GaussianState::coherent(0.4, -0.2);
        let sq = Squeezing([0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6]);
        // A correlated decoded state: skip decoding so detectors see entangled modes.
        let enc = encode9(&input, &sq).unwrap();
        let syn = Syndrome { outcomes: [0.3, -0.1, 0.5, 0.2, -0.4, 0.05, 0.6, -0.3] };
        let a = condition_on_outcomes(&enc, &syn, &MEASUREMENT_ORDER).unwrap();
        let b = condition_on_outcomes(&enc, &syn, &[8, 3, 5, 1, 7, 2, 6, 4]).unwrap();
        assert!((a.cov() - b.cov()).amax() < 1e-10);
        assert!((a.mean() - b.mean()).amax() < 1e-10);
    }
}
