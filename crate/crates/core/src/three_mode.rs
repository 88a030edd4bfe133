//! The three-mode code under independent stochastic x-displacement
//! channels on every mode.
//!
//! Each channel displaces its mode by `x̄2` in x with probability `γ`. The
//! encoded state after the channels is an eight-component Gaussian mixture.
//! Decoding inverts the tritter, x-homodyne detection of modes 2 and 3
//! gives a sign pattern, and mode 1 is displaced back by the amount
//! inferred from the outcomes.

use std::fmt;

use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use serde::Serialize;

use crate::error::{QecError, Result};
use crate::montecarlo::{run_trials, Estimate};
use crate::network::tritter;
use crate::phase_space::{mixture_fidelity_to_coherent, GaussianMixture, GaussianState, QuadratureTarget, SqueezeAxis};
use crate::units::VACUUM_VARIANCE;

/// Default cap on mixture size before a channel application is refused.
pub const DEFAULT_COMPONENT_LIMIT: usize = 4096;

/// Half-width of the outcome window integrated by the exact evaluator, in
/// standard deviations.
const EXACT_WINDOW_SIGMA: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StochasticChannel {
    pub gamma: f64,
    pub xbar2: f64,
}

impl StochasticChannel {
    pub fn new(gamma: f64, xbar2: f64) -> Result<Self> {
        let ch = StochasticChannel { gamma, xbar2 };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(QecError::InvalidParameter(format!("gamma must be in [0, 1], got {}", self.gamma)));
        }
        if !(self.xbar2.is_finite() && self.xbar2 > 0.0) {
            return Err(QecError::InvalidParameter(format!("xbar2 must be positive, got {}", self.xbar2)));
        }
        Ok(())
    }
}

/// Set of channels hit by an error, as a bitmask over channels 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Support(pub u8);

impl Support {
    pub const EMPTY: Support = Support(0);
    pub const ALL: Support = Support(0b111);

    pub fn from_channels(channels: &[usize]) -> Self {
        Support(channels.iter().fold(0, |m, &c| m | (1 << (c - 1))))
    }

    pub fn contains(self, channel: usize) -> bool {
        self.0 & (1 << (channel - 1)) != 0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    pub fn channels(self) -> impl Iterator<Item = usize> {
        (1..=3).filter(move |&c| self.contains(c))
    }

    pub fn all() -> impl Iterator<Item = Support> {
        (0..8).map(Support)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.channels().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", c.join(","))
    }
}

/// Tritter on the input and two x-squeezed ancillas.
pub fn encode3(input: &GaussianState, r: f64) -> Result<GaussianState> {
    if input.n_modes() != 1 {
        return Err(QecError::DimensionMismatch { expected: 1, actual: input.n_modes() });
    }
    let anc = GaussianState::squeezed(r, SqueezeAxis::X)?;
    GaussianState::tensor(&[input.clone(), anc.clone(), anc])?.apply_mode_matrix(&tritter(), &[0, 1, 2])
}

/// Splits every component into the eight error patterns of the channels.
pub fn apply_stochastic_channel(
    mixture: &GaussianMixture,
    channel: &StochasticChannel,
    component_limit: usize,
) -> Result<GaussianMixture> {
    channel.validate()?;
    if mixture.n_modes() != 3 {
        return Err(QecError::DimensionMismatch { expected: 3, actual: mixture.n_modes() });
    }
    let branches = Support::all().filter(|s| support_weight(*s, channel.gamma) > 0.0).count();
    let components = mixture.len() * branches;
    if components > component_limit {
        return Err(QecError::MixtureTooLarge { components, limit: component_limit });
    }
    mixture.flat_map(|state| {
        Support::all()
            .filter_map(|s| {
                let w = support_weight(s, channel.gamma);
                (w > 0.0).then(|| {
                    let mut out = state.clone();
                    for c in s.channels() {
                        out = out.displace(c - 1, channel.xbar2, 0.0)?;
                    }
                    Ok((w, out))
                })
            })
            .collect()
    })
}

/// Probability `γ^k (1−γ)^{3−k}` of a given error support of size `k`.
pub fn support_weight(support: Support, gamma: f64) -> f64 {
    let k = support.size() as i32;
    gamma.powi(k) * (1.0 - gamma).powi(3 - k)
}

pub fn decode3(mixture: &GaussianMixture) -> Result<GaussianMixture> {
    let inverse = tritter().inverse();
    mixture.map(|s| s.apply_mode_matrix(&inverse, &[0, 1, 2]))
}

/// Decoded x shifts per unit `x̄2` for an error support: mode 1 and the
/// two ancilla modes.
pub fn decoded_signature(support: Support) -> (f64, [f64; 2]) {
    let t = tritter();
    let mut s = 0.0;
    let mut u = [0.0; 2];
    for c in support.channels() {
        s += t.get(c - 1, 0);
        u[0] += t.get(c - 1, 1);
        u[1] += t.get(c - 1, 2);
    }
    (s, u)
}

/// Outcome level separating `0` from `±`: `k` ancilla standard deviations,
/// capped at half the smallest nonzero decoded shift `x̄2/√6`.
pub fn syndrome_threshold(r: f64, xbar2: f64, threshold_sigma: f64) -> f64 {
    let noise = threshold_sigma * (-r).exp() / 2.0;
    noise.min(xbar2 / (2.0 * 6f64.sqrt()))
}

/// Reads the sign pattern of the two ancilla outcomes. `(0,0)` maps to the
/// empty support; patterns outside the table give `None`.
pub fn classify3(x2: f64, x3: f64, r: f64, xbar2: f64, threshold_sigma: f64) -> Option<Support> {
    let tau = syndrome_threshold(r, xbar2, threshold_sigma);
    let sign = |v: f64| {
        if v > tau {
            1
        } else if v < -tau {
            -1
        } else {
            0
        }
    };
    let c = Support::from_channels;
    match (sign(x2), sign(x3)) {
        (0, 0) => Some(Support::EMPTY),
        (1, 0) => Some(c(&[1])),
        (-1, 1) => Some(c(&[2])),
        (-1, -1) => Some(c(&[3])),
        (1, 1) => Some(c(&[1, 2])),
        (1, -1) => Some(c(&[1, 3])),
        (-1, 0) => Some(c(&[2, 3])),
        _ => None,
    }
}

/// Mode-1 x displacement that undoes the error inferred from the outcomes:
/// the shift `x̂` is fitted by least squares to the signature of `support`.
pub fn correction_shift(support: Option<Support>, x2: f64, x3: f64) -> f64 {
    match support {
        None => 0.0,
        Some(s) if s == Support::EMPTY => 0.0,
        Some(s) => {
            let (m1, u) = decoded_signature(s);
            let norm = u[0] * u[0] + u[1] * u[1];
            let xhat = (u[0] * x2 + u[1] * x3) / norm;
            -m1 * xhat
        }
    }
}

pub fn correct3(remainder: &GaussianMixture, support: Option<Support>, x2: f64, x3: f64) -> Result<GaussianMixture> {
    let dx = correction_shift(support, x2, x3);
    if dx == 0.0 {
        return Ok(remainder.clone());
    }
    remainder.map(|s| s.displace(0, dx, 0.0))
}

/// Measures x of decoded modes 2 and 3 and returns the outcomes with the
/// posterior mixture of mode 1.
pub fn measure_syndrome3<R: Rng + ?Sized>(
    decoded: &GaussianMixture,
    rng: &mut R,
) -> Result<(f64, f64, GaussianMixture)> {
    if decoded.n_modes() != 3 {
        return Err(QecError::DimensionMismatch { expected: 3, actual: decoded.n_modes() });
    }
    let (x2, rest) = decoded.homodyne_sample(QuadratureTarget::x(1), rng)?;
    let rest = rest.expect("two modes remain");
    let (x3, rest) = rest.homodyne_sample(QuadratureTarget::x(1), rng)?;
    Ok((x2, x3, rest.expect("one mode remains")))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThreeModeConfig {
    pub channel: StochasticChannel,
    pub r: f64,
    pub threshold_sigma: f64,
    /// Coherent input amplitude `(x̄1, p̄1)`.
    pub input: (f64, f64),
    pub component_limit: usize,
}

impl ThreeModeConfig {
    pub fn new(channel: StochasticChannel, r: f64) -> Self {
        ThreeModeConfig {
            channel,
            r,
            threshold_sigma: crate::shor9::DEFAULT_THRESHOLD_SIGMA,
            input: (0.0, 0.0),
            component_limit: DEFAULT_COMPONENT_LIMIT,
        }
    }

    fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(QecError::InvalidParameter(format!("r must be finite and >= 0, got {}", self.r)));
        }
        if !(self.threshold_sigma.is_finite() && self.threshold_sigma > 0.0) {
            return Err(QecError::InvalidParameter("threshold multiplier must be positive".into()));
        }
        Ok(())
    }

    /// Decoded state ready for the syndrome measurement.
    pub fn decoded_output(&self) -> Result<GaussianMixture> {
        decode3(&self.channel_output()?)
    }

    /// Encoded state after the channels, before decoding.
    pub fn channel_output(&self) -> Result<GaussianMixture> {
        self.validate()?;
        let input = GaussianState::coherent(self.input.0, self.input.1);
        let encoded = GaussianMixture::from_state(encode3(&input, self.r)?);
        apply_stochastic_channel(&encoded, &self.channel, self.component_limit)
    }
}

/// One trial on the decoded mixture: sample the syndrome, correct, and
/// return the fidelity of the posterior mode-1 state with the input.
pub fn run_trial3<R: Rng + ?Sized>(config: &ThreeModeConfig, decoded: &GaussianMixture, rng: &mut R) -> Result<f64> {
    let (x2, x3, rest) = measure_syndrome3(decoded, rng)?;
    let support = classify3(x2, x3, config.r, config.channel.xbar2, config.threshold_sigma);
    let corrected = correct3(&rest, support, x2, x3)?;
    mixture_fidelity_to_coherent(&corrected, config.input)
}

pub fn ensemble_fidelity_mc(config: &ThreeModeConfig, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(QecError::InvalidParameter("trials must be positive".into()));
    }
    let decoded = config.decoded_output()?;
    let samples = run_trials(seed, trials, |_, rng| run_trial3(config, &decoded, rng))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&samples))
}

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Composite 8-point Gauss-Legendre nodes and weights on `[a, b]` with
/// panels no wider than `h`.
fn panel_rule(a: f64, b: f64, h: f64) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let panels = ((b - a) / h).ceil().max(1.0) as usize;
    let w = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * 8);
    for i in 0..panels {
        let mid = a + (i as f64 + 0.5) * w;
        for (n, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
            out.push((mid + 0.5 * w * n, 0.5 * w * wt));
        }
    }
    out
}

/// Ensemble fidelity by direct integration over the two syndrome outcomes,
/// component by component. Within each threshold cell the correction is
/// linear in the outcomes, so the integrand is smooth there.
pub fn ensemble_fidelity_exact(config: &ThreeModeConfig) -> Result<f64> {
    let decoded = config.decoded_output()?;
    let tau = syndrome_threshold(config.r, config.channel.xbar2, config.threshold_sigma);
    let edges = [f64::NEG_INFINITY, -tau, tau, f64::INFINITY];
    let mut total = 0.0;
    for (w, state) in decoded.components() {
        let mu = state.mean();
        let v = state.cov();
        // Outcome block: x of modes 2 and 3 (indices 2 and 4).
        let mu_o = Vector2::new(mu[2], mu[4]);
        let v_oo = Matrix2::new(v[(2, 2)], v[(2, 4)], v[(4, 2)], v[(4, 4)]);
        let v_1o = Matrix2::new(v[(0, 2)], v[(0, 4)], v[(1, 2)], v[(1, 4)]);
        let v_11 = Matrix2::new(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]);
        let inv =
            v_oo.try_inverse().ok_or_else(|| QecError::InvariantViolation("singular syndrome covariance".into()))?;
        let gain = v_1o * inv;
        let cond = v_11 - gain * v_1o.transpose();
        if cond[(0, 1)].abs() >= crate::phase_space::MAX_XP_CORRELATION {
            return Err(QecError::CorrelatedQuadratures { cov_xp: cond[(0, 1)] });
        }
        let sx = cond[(0, 0)] + VACUUM_VARIANCE;
        let sp = cond[(1, 1)] + VACUUM_VARIANCE;
        let det = v_oo.determinant();
        let norm = 1.0 / (2.0 * std::f64::consts::PI * det.sqrt());
        let sig = [v_oo[(0, 0)].sqrt(), v_oo[(1, 1)].sqrt()];
        let h = [(sig[0] / 2.0).min(0.2), (sig[1] / 2.0).min(0.2)];
        let window = |axis: usize, cell: usize| {
            let lo = (mu_o[axis] - EXACT_WINDOW_SIGMA * sig[axis]).max(edges[cell]);
            let hi = (mu_o[axis] + EXACT_WINDOW_SIGMA * sig[axis]).min(edges[cell + 1]);
            panel_rule(lo, hi, h[axis])
        };
        let mut component = 0.0;
        for c2 in 0..3 {
            let rule2 = window(0, c2);
            if rule2.is_empty() {
                continue;
            }
            for c3 in 0..3 {
                let rule3 = window(1, c3);
                for &(o2, w2) in &rule2 {
                    for &(o3, w3) in &rule3 {
                        let d = Vector2::new(o2, o3) - mu_o;
                        let density = norm * (-0.5 * d.dot(&(inv * d))).exp();
                        let m = Vector2::new(mu[0], mu[1]) + gain * d;
                        let support = classify3(o2, o3, config.r, config.channel.xbar2, config.threshold_sigma);
                        let dx = m[0] + correction_shift(support, o2, o3) - config.input.0;
                        let dp = m[1] - config.input.1;
                        let f = (-dx * dx / (2.0 * sx) - dp * dp / (2.0 * sp)).exp() / (2.0 * (sx * sp).sqrt());
                        component += w2 * w3 * density * f;
                    }
                }
            }
        }
        total += w * component;
    }
    Ok(total)
}

/// Fidelity without encoding: the input is displaced by `x̄2` with
/// probability `γ`.
pub fn direct_fidelity(channel: &StochasticChannel) -> f64 {
    1.0 - channel.gamma + channel.gamma * (-channel.xbar2 * channel.xbar2).exp()
}

/// Infinite-squeezing ensemble fidelity: only the all-three-errors case
/// survives, leaving a shift `√3·x̄2`.
pub fn high_squeezing_limit(channel: &StochasticChannel) -> f64 {
    let g3 = channel.gamma.powi(3);
    1.0 - g3 * (1.0 - (-3.0 * channel.xbar2 * channel.xbar2).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepPolicy {
    MonteCarlo,
    Exact,
    Direct,
}

impl fmt::Display for SweepPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepPolicy::MonteCarlo => "monte-carlo",
            SweepPolicy::Exact => "exact",
            SweepPolicy::Direct => "direct",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub xbar2: f64,
    pub r: f64,
    pub policy: SweepPolicy,
    pub fidelity: f64,
    pub stderr: f64,
    pub trials: u64,
    pub seed: u64,
    /// Monte Carlo and exact values within three standard errors.
    pub mc_exact_agree: bool,
}

/// Fidelity table over a grid. Each `(γ, x̄2)` pair gets a direct
/// transmission row, and each `r` a Monte Carlo row (skipped when
/// `trials == 0`) and an exact row. Monte Carlo cells use seeds
/// `seed + cell index`.
pub fn cec_vs_qec_sweep(
    gammas: &[f64],
    xbars: &[f64],
    rs: &[f64],
    trials: u64,
    seed: u64,
    threshold_sigma: f64,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &gamma in gammas {
        for &xbar2 in xbars {
            let channel = StochasticChannel::new(gamma, xbar2)?;
            rows.push(SweepRow {
                gamma,
                xbar2,
                r: 0.0,
                policy: SweepPolicy::Direct,
                fidelity: direct_fidelity(&channel),
                stderr: 0.0,
                trials: 0,
                seed,
                mc_exact_agree: true,
            });
            for &r in rs {
                let mut config = ThreeModeConfig::new(channel, r);
                config.threshold_sigma = threshold_sigma;
                let exact = ensemble_fidelity_exact(&config)?;
                let cell_seed = seed.wrapping_add(cell);
                cell += 1;
                let mut agree = true;
                if trials > 0 {
                    let mc = ensemble_fidelity_mc(&config, trials, cell_seed)?;
                    agree = (mc.mean - exact).abs() <= 3.0 * mc.stderr + 1e-12;
                    rows.push(SweepRow {
                        gamma,
                        xbar2,
                        r,
                        policy: SweepPolicy::MonteCarlo,
                        fidelity: mc.mean,
                        stderr: mc.stderr,
                        trials,
                        seed: cell_seed,
                        mc_exact_agree: agree,
                    });
                }
                rows.push(SweepRow {
                    gamma,
                    xbar2,
                    r,
                    policy: SweepPolicy::Exact,
                    fidelity: exact,
                    stderr: 0.0,
                    trials: 0,
                    seed: cell_seed,
                    mc_exact_agree: agree,
                });
            }
        }
    }
    Ok(rows)
}
