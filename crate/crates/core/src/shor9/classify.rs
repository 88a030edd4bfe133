use std::fmt;

use serde::{Serialize, Serializer};
use statrs::function::erf::erfc;

use super::protocol::Syndrome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairPattern {
    Quiet,
    FirstOnly,
    SecondOnly,
    /// Both above threshold with equal signs.
    EqualSigns,
    /// Both above threshold with different signs.
    DifferentSigns,
}

impl PairPattern {
    fn of(a: f64, b: f64, ta: f64, tb: f64) -> Self {
        match (a.abs() > ta, b.abs() > tb) {
            (false, false) => PairPattern::Quiet,
            (true, false) => PairPattern::FirstOnly,
            (false, true) => PairPattern::SecondOnly,
            (true, true) if a.signum() == b.signum() => PairPattern::EqualSigns,
            (true, true) => PairPattern::DifferentSigns,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoError,
    Channel(usize),
    /// An x-only error located to a triplet (1..=3); the channel within
    /// the triplet is not resolved but the x correction is the same for
    /// all three.
    Triplet(usize),
    Ambiguous,
}

impl Verdict {
    pub fn channel(self) -> Option<usize> {
        match self {
            Verdict::Channel(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NoError => write!(f, "no-error"),
            Verdict::Channel(c) => write!(f, "channel-{c}"),
            Verdict::Triplet(t) => write!(f, "triplet-{t}"),
            Verdict::Ambiguous => write!(f, "ambiguous"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// Detectors above threshold (index = label − 1).
    pub active: [bool; 8],
    /// Detectors 1 and 4.
    pub x_pair: PairPattern,
    /// Detector pairs (2,3), (5,6), (7,8).
    pub p_pairs: [PairPattern; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum XHypothesis {
    Quiet,
    Triplet(usize),
    /// Only detector 4 fired: triplet 2 or 3.
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PHypothesis {
    Quiet,
    Channel(usize),
    Ambiguous,
}

/// Applies the syndrome lookup table. `thresholds[d]` is the activation
/// level of detector `d + 1`.
///
/// Detector 1 alone marks triplet 1, detectors 1 and 4 with different
/// signs triplet 2 and with equal signs triplet 3. Within the triplet the
/// p pair marks the member: first alone, different signs, equal signs.
/// Detector 4 alone (detector 1 lost in noise) is accepted when the p pair
/// points into triplet 2 or 3.
pub fn classify(syndrome: &Syndrome, thresholds: &[f64; 8]) -> Classification {
    let o = &syndrome.outcomes;
    let mut active = [false; 8];
    for d in 0..8 {
        active[d] = o[d].abs() > thresholds[d];
    }
    let x_pair = PairPattern::of(o[0], o[3], thresholds[0], thresholds[3]);
    let p_pairs = [
        PairPattern::of(o[1], o[2], thresholds[1], thresholds[2]),
        PairPattern::of(o[4], o[5], thresholds[4], thresholds[5]),
        PairPattern::of(o[6], o[7], thresholds[6], thresholds[7]),
    ];

    let x = match x_pair {
        PairPattern::Quiet => XHypothesis::Quiet,
        PairPattern::FirstOnly => XHypothesis::Triplet(1),
        PairPattern::DifferentSigns => XHypothesis::Triplet(2),
        PairPattern::EqualSigns => XHypothesis::Triplet(3),
        PairPattern::SecondOnly => XHypothesis::Upper,
    };

    let fired: Vec<usize> = (0..3).filter(|&t| p_pairs[t] != PairPattern::Quiet).collect();
    let p = match fired.as_slice() {
        [] => PHypothesis::Quiet,
        [t] => match p_pairs[*t] {
            PairPattern::FirstOnly => PHypothesis::Channel(3 * t + 1),
            PairPattern::DifferentSigns => PHypothesis::Channel(3 * t + 2),
            PairPattern::EqualSigns => PHypothesis::Channel(3 * t + 3),
            _ => PHypothesis::Ambiguous,
        },
        _ => PHypothesis::Ambiguous,
    };

    let triplet_of = |c: usize| (c - 1) / 3 + 1;
    let verdict = match (x, p) {
        (XHypothesis::Quiet, PHypothesis::Quiet) => Verdict::NoError,
        (XHypothesis::Quiet, PHypothesis::Channel(c)) => Verdict::Channel(c),
        (XHypothesis::Triplet(t), PHypothesis::Channel(c)) if triplet_of(c) == t => Verdict::Channel(c),
        (XHypothesis::Upper, PHypothesis::Channel(c)) if triplet_of(c) >= 2 => Verdict::Channel(c),
        (XHypothesis::Triplet(t), PHypothesis::Quiet) => Verdict::Triplet(t),
        _ => Verdict::Ambiguous,
    };
    Classification { verdict, active, x_pair, p_pairs }
}

/// Probability that a zero-mean Gaussian detector exceeds `k` standard
/// deviations in magnitude, and that at least one of eight independent
/// detectors does.
pub fn false_alarm_probability(threshold_sigma: f64) -> (f64, f64) {
    let single = erfc(threshold_sigma / std::f64::consts::SQRT_2);
    (single, 1.0 - (1.0 - single).powi(8))
}
