//! Quadrature correlations of the nine-mode code state and the
//! inseparability witnesses built from them.
//!
//! Every variance is taken on the encoded [`GaussianState`]; the symbolic
//! ledger gives an independent route to the same numbers.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::error::{QecError, Result};
use crate::network::fixture::nullifier_forms;
use crate::network::{encode_ledger, LedgerSet, LinearForm, Quadrature, SymbolStats};
use crate::phase_space::GaussianState;
use crate::shor9::encode9;
use crate::units::{Squeezing, VACUUM_VARIANCE};

/// Separable states give a witness value of at least this.
pub const WITNESS_BOUND: f64 = 1.0;

/// A witness counts as satisfied only when it beats the bound by more than
/// this, so that rounding at the separable boundary is not read as
/// entanglement.
pub const SATISFACTION_MARGIN: f64 = 1e-9;

/// `Σ xc_i x_i + Σ pc_i p_i` over the nine code modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Combination {
    pub xc: [f64; 9],
    pub pc: [f64; 9],
}

impl Combination {
    pub fn zero() -> Self {
        Combination { xc: [0.0; 9], pc: [0.0; 9] }
    }

    pub fn x(xc: [f64; 9]) -> Self {
        Combination { xc, pc: [0.0; 9] }
    }

    pub fn p(pc: [f64; 9]) -> Self {
        Combination { xc: [0.0; 9], pc }
    }

    /// Single quadrature of `mode` (1-based) with coefficient `c`.
    pub fn single(q: Quadrature, mode: usize, c: f64) -> Self {
        let mut out = Combination::zero();
        out.slot_mut(q)[mode - 1] = c;
        out
    }

    pub fn from_weights(q: Quadrature, weights: [i8; 9]) -> Self {
        let mut out = Combination::zero();
        for (c, w) in out.slot_mut(q).iter_mut().zip(weights) {
            *c = f64::from(w);
        }
        out
    }

    fn slot_mut(&mut self, q: Quadrature) -> &mut [f64; 9] {
        match q {
            Quadrature::X => &mut self.xc,
            Quadrature::P => &mut self.pc,
        }
    }

    pub fn plus(&self, other: &Combination) -> Combination {
        let mut out = *self;
        for i in 0..9 {
            out.xc[i] += other.xc[i];
            out.pc[i] += other.pc[i];
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Combination {
        Combination { xc: self.xc.map(|c| c * s), pc: self.pc.map(|c| c * s) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.xc.iter().chain(&self.pc).all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(QecError::InvalidParameter("combination coefficients must be finite".into()))
        }
    }

    /// Coefficient vector in interleaved `(x1, p1, ...)` order.
    pub fn interleaved(&self) -> Vec<f64> {
        (0..9).flat_map(|i| [self.xc[i], self.pc[i]]).collect()
    }

    /// The same combination written in ledger symbols.
    pub fn ledger_form(&self, ledger: &LedgerSet) -> LinearForm {
        let mut out = LinearForm::zero();
        for m in 0..9 {
            out.add_scaled(ledger.x(m + 1), self.xc[m]);
            out.add_scaled(ledger.p(m + 1), self.pc[m]);
        }
        out
    }
}

pub fn combination_variance(state: &GaussianState, comb: &Combination) -> Result<f64> {
    comb.validate()?;
    if state.n_modes() != 9 {
        return Err(QecError::DimensionMismatch { expected: 9, actual: state.n_modes() });
    }
    state.linear_variance(&comb.interleaved())
}

fn combination_covariance(state: &GaussianState, a: &Combination, b: &Combination) -> Result<f64> {
    state.linear_covariance(&a.interleaved(), &b.interleaved())
}

/// Encoded code state for a vacuum input.
pub fn vacuum_code_state(squeezing: &Squeezing) -> Result<GaussianState> {
    encode9(&GaussianState::vacuum(1)?, squeezing)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullifierCheck {
    pub label: String,
    pub variance: f64,
    pub closed_form: f64,
    pub abs_diff: f64,
}

/// Variances of the eight stabilizer correlations next to their printed
/// closed forms.
pub fn nullifier_suite(squeezing: &Squeezing) -> Result<Vec<NullifierCheck>> {
    let state = vacuum_code_state(squeezing)?;
    nullifier_forms()
        .into_iter()
        .map(|form| {
            let variance = combination_variance(&state, &Combination::from_weights(form.quadrature, form.weights))?;
            let closed_form: f64 = form
                .terms
                .iter()
                .map(|t| {
                    let k = match t.symbol {
                        crate::network::Symbol::Ancilla(k, _) => k,
                        _ => unreachable!("correlations contain ancilla terms only"),
                    };
                    let c = t.coefficient.value();
                    c * c * VACUUM_VARIANCE * (2.0 * f64::from(t.exponent) * squeezing.get(k)).exp()
                })
                .sum();
            Ok(NullifierCheck {
                label: form.label.to_string(),
                variance,
                closed_form,
                abs_diff: (variance - closed_form).abs(),
            })
        })
        .collect()
}

/// `X = x1+x2+x3` and `P = p1+p4+p7`.
pub fn logical_combinations() -> (Combination, Combination) {
    (
        Combination::from_weights(Quadrature::X, [1, 1, 1, 0, 0, 0, 0, 0, 0]),
        Combination::from_weights(Quadrature::P, [1, 0, 0, 1, 0, 0, 1, 0, 0]),
    )
}

/// Variances of the logical quadratures for a vacuum input.
pub fn logical_quadrature_variances(squeezing: &Squeezing) -> Result<(f64, f64)> {
    let state = vacuum_code_state(squeezing)?;
    let (x, p) = logical_combinations();
    Ok((combination_variance(&state, &x)?, combination_variance(&state, &p)?))
}

/// The four further triplet sums correlated with the input.
pub fn triplet_sum_combinations() -> [(&'static str, Combination); 4] {
    use Quadrature::{P, X};
    [
        ("x4+x5+x6", Combination::from_weights(X, [0, 0, 0, 1, 1, 1, 0, 0, 0])),
        ("x7+x8+x9", Combination::from_weights(X, [0, 0, 0, 0, 0, 0, 1, 1, 1])),
        ("p2+p5+p8", Combination::from_weights(P, [0, 1, 0, 0, 1, 0, 0, 1, 0])),
        ("p3+p6+p9", Combination::from_weights(P, [0, 0, 1, 0, 0, 1, 0, 0, 1])),
    ]
}

pub fn triplet_sum_variances(squeezing: &Squeezing) -> Result<[(&'static str, f64); 4]> {
    let state = vacuum_code_state(squeezing)?;
    let mut out = [("", 0.0); 4];
    for (slot, (label, comb)) in out.iter_mut().zip(triplet_sum_combinations()) {
        *slot = (label, combination_variance(&state, &comb)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntraVariant {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Three-party witness inside triplet 1, 2 or 3 (modes 123, 456, 789).
    Intra { triplet: usize, variant: IntraVariant },
    /// Inter-triplet witness 1 or 2.
    Inter(usize),
}

impl WitnessKind {
    pub fn all() -> Vec<WitnessKind> {
        let mut out = Vec::with_capacity(8);
        for triplet in 1..=3 {
            for variant in [IntraVariant::A, IntraVariant::B] {
                out.push(WitnessKind::Intra { triplet, variant });
            }
        }
        out.push(WitnessKind::Inter(1));
        out.push(WitnessKind::Inter(2));
        out
    }

    pub fn n_gains(self) -> usize {
        match self {
            WitnessKind::Intra { .. } => 1,
            WitnessKind::Inter(_) => 5,
        }
    }

    fn validate(self) -> Result<()> {
        let ok = match self {
            WitnessKind::Intra { triplet, .. } => (1..=3).contains(&triplet),
            WitnessKind::Inter(w) => w == 1 || w == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(QecError::InvalidParameter(format!("no such witness: {self:?}")))
        }
    }

    /// The two variance terms, each as a fixed part plus gain-weighted
    /// directions `(gain index, direction)`.
    fn terms(self) -> [WitnessTerm; 2] {
        use Quadrature::{P, X};
        let q = Combination::single;
        match self {
            WitnessKind::Intra { triplet, variant } => {
                let m = 3 * (triplet - 1);
                match variant {
                    IntraVariant::A => [
                        WitnessTerm::fixed(q(P, m + 1, 1.0).plus(&q(P, m + 2, -1.0))),
                        WitnessTerm {
                            base: q(X, m + 1, 1.0).plus(&q(X, m + 2, 1.0)),
                            slots: vec![(0, q(X, m + 3, 1.0))],
                        },
                    ],
                    IntraVariant::B => [
                        WitnessTerm::fixed(q(P, m + 2, 1.0).plus(&q(P, m + 3, -1.0))),
                        WitnessTerm {
                            base: q(X, m + 2, 1.0).plus(&q(X, m + 3, 1.0)),
                            slots: vec![(0, q(X, m + 1, 1.0))],
                        },
                    ],
                }
            }
            WitnessKind::Inter(1) => [
                WitnessTerm { base: q(P, 1, 1.0).plus(&q(P, 4, 1.0)), slots: vec![(0, q(P, 7, 1.0))] },
                WitnessTerm {
                    base: q(X, 1, 1.0).plus(&q(X, 4, -1.0)),
                    slots: vec![(1, q(X, 2, 1.0)), (2, q(X, 3, 1.0)), (3, q(X, 5, -1.0)), (4, q(X, 6, -1.0))],
                },
            ],
            WitnessKind::Inter(_) => [
                WitnessTerm { base: q(P, 4, 1.0).plus(&q(P, 7, 1.0)), slots: vec![(0, q(P, 1, 1.0))] },
                WitnessTerm {
                    base: q(X, 4, 1.0).plus(&q(X, 7, -1.0)),
                    slots: vec![(1, q(X, 5, 1.0)), (2, q(X, 6, 1.0)), (3, q(X, 8, -1.0)), (4, q(X, 9, -1.0))],
                },
            ],
        }
    }

    /// The two combinations whose variances are summed, at the given gains.
    pub fn combinations(self, gains: &[f64]) -> Result<[Combination; 2]> {
        self.validate()?;
        if gains.len() != self.n_gains() {
            return Err(QecError::DimensionMismatch { expected: self.n_gains(), actual: gains.len() });
        }
        Ok(self.terms().map(|t| t.at(gains)))
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::Intra { triplet, variant } => {
                let modes = ["123", "456", "789"][triplet - 1];
                let v = if *variant == IntraVariant::A { "a" } else { "b" };
                write!(f, "intra-{modes}{v}")
            }
            WitnessKind::Inter(w) => write!(f, "inter-{w}"),
        }
    }
}

impl Serialize for WitnessKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

struct WitnessTerm {
    base: Combination,
    slots: Vec<(usize, Combination)>,
}

impl WitnessTerm {
    fn fixed(base: Combination) -> Self {
        WitnessTerm { base, slots: Vec::new() }
    }

    fn at(&self, gains: &[f64]) -> Combination {
        self.slots.iter().fold(self.base, |acc, (i, dir)| acc.plus(&dir.scaled(gains[*i])))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessResult {
    pub kind: WitnessKind,
    /// Sum of the two variances.
    pub value: f64,
    pub bound: f64,
    pub gains: Vec<f64>,
    pub satisfied: bool,
    /// Set when the gain optimizer hit a singular system and kept unit gains
    /// for at least one term.
    pub fallback: bool,
}

pub fn evaluate_witness(state: &GaussianState, kind: WitnessKind, gains: &[f64]) -> Result<WitnessResult> {
    let [a, b] = kind.combinations(gains)?;
    let value = combination_variance(state, &a)? + combination_variance(state, &b)?;
    Ok(WitnessResult {
        kind,
        value,
        bound: WITNESS_BOUND,
        gains: gains.to_vec(),
        satisfied: value < WITNESS_BOUND - SATISFACTION_MARGIN,
        fallback: false,
    })
}

pub fn witness_intra(state: &GaussianState, triplet: usize, variant: IntraVariant, gain: f64) -> Result<WitnessResult> {
    evaluate_witness(state, WitnessKind::Intra { triplet, variant }, &[gain])
}

pub fn witness_inter(state: &GaussianState, which: usize, gains: [f64; 5]) -> Result<WitnessResult> {
    evaluate_witness(state, WitnessKind::Inter(which), &gains)
}

/// Minimizes each variance term over its own gains. Each term is quadratic
/// in its gains, `Var(b + Σ g_i v_i)`, with minimizer `G g = −c` where
/// `G_ij = Cov(v_i, v_j)` and `c_i = Cov(v_i, b)`.
pub fn optimize_gains(state: &GaussianState, kind: WitnessKind) -> Result<WitnessResult> {
    kind.validate()?;
    let mut gains = vec![1.0; kind.n_gains()];
    let mut fallback = false;
    for term in kind.terms() {
        let n = term.slots.len();
        if n == 0 {
            continue;
        }
        let mut g = DMatrix::zeros(n, n);
        let mut c = DVector::zeros(n);
        for (i, (_, vi)) in term.slots.iter().enumerate() {
            c[i] = combination_covariance(state, vi, &term.base)?;
            for (j, (_, vj)) in term.slots.iter().enumerate() {
                g[(i, j)] = combination_covariance(state, vi, vj)?;
            }
        }
        match g.cholesky() {
            Some(chol) => {
                let sol = chol.solve(&(-c));
                for (k, (slot, _)) in term.slots.iter().enumerate() {
                    gains[*slot] = sol[k];
                }
            }
            None => {
                log::warn!("{kind}: singular gain system, keeping unit gains");
                fallback = true;
            }
        }
    }
    let mut out = evaluate_witness(state, kind, &gains)?;
    out.fallback = fallback;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRow {
    pub unit: WitnessResult,
    pub optimized: WitnessResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub squeezing: [f64; 8],
    pub nullifiers: Vec<NullifierCheck>,
    pub logical_x_variance: f64,
    pub logical_p_variance: f64,
    pub triplet_sums: Vec<(String, f64)>,
    pub witnesses: Vec<WitnessRow>,
    pub all_unit_satisfied: bool,
    pub all_optimized_satisfied: bool,
    pub any_satisfied: bool,
}

/// All correlation variances and witnesses for a vacuum input.
pub fn full_report(squeezing: &Squeezing) -> Result<WitnessReport> {
    let state = vacuum_code_state(squeezing)?;
    let witnesses = WitnessKind::all()
        .into_iter()
        .map(|kind| {
            Ok(WitnessRow {
                unit: evaluate_witness(&state, kind, &vec![1.0; kind.n_gains()])?,
                optimized: optimize_gains(&state, kind)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (logical_x_variance, logical_p_variance) = logical_quadrature_variances(squeezing)?;
    Ok(WitnessReport {
        squeezing: squeezing.0,
        nullifiers: nullifier_suite(squeezing)?,
        logical_x_variance,
        logical_p_variance,
        triplet_sums: triplet_sum_variances(squeezing)?.iter().map(|(l, v)| (l.to_string(), *v)).collect(),
        all_unit_satisfied: witnesses.iter().all(|w| w.unit.satisfied),
        all_optimized_satisfied: witnesses.iter().all(|w| w.optimized.satisfied),
        any_satisfied: witnesses.iter().any(|w| w.unit.satisfied || w.optimized.satisfied),
        witnesses,
    })
}

/// Ledger evaluation of a combination variance, independent of the
/// covariance-matrix route.
pub fn ledger_variance(comb: &Combination, squeezing: &Squeezing) -> f64 {
    comb.ledger_form(&encode_ledger()).variance(&SymbolStats::new(*squeezing))
}
