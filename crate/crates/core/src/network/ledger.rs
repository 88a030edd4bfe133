use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tritter::build_encoder_matrix;
use crate::phase_space::SqueezeAxis;
use crate::units::{Squeezing, VACUUM_VARIANCE};

/// Coefficients smaller than this are dropped after composing forms.
pub const PRUNE_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    pub fn label(self) -> &'static str {
        match self {
            Quadrature::X => "x",
            Quadrature::P => "p",
        }
    }
}

/// A ledger variable. Ancillas are labelled 1..=8 and error channels 1..=9.
/// Ancilla symbols stand for vacuum quadratures; the squeezing factor is
/// applied on evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Input(Quadrature),
    Ancilla(usize, Quadrature),
    Error(usize, Quadrature),
}

impl Symbol {
    pub fn quadrature(self) -> Quadrature {
        match self {
            Symbol::Input(q) | Symbol::Ancilla(_, q) | Symbol::Error(_, q) => q,
        }
    }

    /// Sign of the squeezing exponent carried by this symbol: `-1` for a
    /// factor `e^{-r_k}`, `+1` for `e^{+r_k}`, `0` for unsqueezed symbols.
    pub fn squeeze_exponent(self) -> i8 {
        match self {
            Symbol::Ancilla(k, q) => {
                let squeezed =
                    matches!((ancilla_axis(k), q), (SqueezeAxis::X, Quadrature::X) | (SqueezeAxis::P, Quadrature::P));
                if squeezed {
                    -1
                } else {
                    1
                }
            }
            _ => 0,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Input(q) => write!(f, "{}_in", q.label()),
            Symbol::Ancilla(k, q) => write!(f, "{}_an{k}", q.label()),
            Symbol::Error(j, q) => write!(f, "{}_err{j}", q.label()),
        }
    }
}

/// Ancillas 1 and 4 are squeezed in x, the other six in p.
pub fn ancilla_axis(ancilla: usize) -> SqueezeAxis {
    if ancilla == 1 || ancilla == 4 {
        SqueezeAxis::X
    } else {
        SqueezeAxis::P
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSource {
    Input,
    Ancilla(usize),
}

/// Which state enters encoder mode `mode` (0-based). The tritter placements
/// put the signal on mode 1, the x-squeezed ancillas on modes 4 and 7 and
/// the p-squeezed ancillas on the rest.
pub fn mode_source(mode: usize) -> ModeSource {
    const SOURCES: [usize; 9] = [0, 2, 3, 1, 5, 6, 4, 7, 8];
    match SOURCES[mode] {
        0 => ModeSource::Input,
        k => ModeSource::Ancilla(k),
    }
}

fn source_symbol(mode: usize, q: Quadrature) -> Symbol {
    match mode_source(mode) {
        ModeSource::Input => Symbol::Input(q),
        ModeSource::Ancilla(k) => Symbol::Ancilla(k, q),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LinearForm {
    terms: BTreeMap<Symbol, f64>,
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    pub fn symbol(sym: Symbol) -> Self {
        LinearForm::from_terms([(sym, 1.0)])
    }

    pub fn from_terms<I: IntoIterator<Item = (Symbol, f64)>>(terms: I) -> Self {
        let mut form = LinearForm::zero();
        for (s, c) in terms {
            form.add_term(s, c);
        }
        form
    }

    pub fn add_term(&mut self, sym: Symbol, coefficient: f64) {
        *self.terms.entry(sym).or_insert(0.0) += coefficient;
    }

    pub fn add_scaled(&mut self, other: &LinearForm, scale: f64) {
        for (&s, &c) in &other.terms {
            self.add_term(s, scale * c);
        }
    }

    pub fn scaled(&self, scale: f64) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn plus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(other, 1.0);
        out
    }

    pub fn minus(&self, other: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    pub fn coefficient(&self, sym: Symbol) -> f64 {
        self.terms.get(&sym).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Symbol, f64)> + '_ {
        self.terms.iter().map(|(&s, &c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pruned(mut self, tolerance: f64) -> LinearForm {
        self.terms.retain(|_, c| c.abs() >= tolerance);
        self
    }

    /// Keeps only the terms whose symbol passes `keep`.
    pub fn filter<F: Fn(Symbol) -> bool>(&self, keep: F) -> LinearForm {
        LinearForm { terms: self.terms.iter().filter(|(s, _)| keep(**s)).map(|(&s, &c)| (s, c)).collect() }
    }

    pub fn error_part(&self) -> LinearForm {
        self.filter(|s| matches!(s, Symbol::Error(..)))
    }

    pub fn ancilla_part(&self) -> LinearForm {
        self.filter(|s| matches!(s, Symbol::Ancilla(..)))
    }

    /// Variance of the form with every symbol treated as independent.
    pub fn variance(&self, stats: &SymbolStats) -> f64 {
        self.terms.iter().map(|(&s, &c)| c * c * stats.variance(s)).sum()
    }

    pub fn covariance(&self, other: &LinearForm, stats: &SymbolStats) -> f64 {
        self.terms.iter().map(|(&s, &c)| c * other.coefficient(s) * stats.variance(s)).sum()
    }

    /// Value of the form for concrete symbol values.
    pub fn evaluate(&self, values: &SymbolValues) -> f64 {
        self.terms.iter().map(|(&s, &c)| c * values.value(s)).sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0.0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sep = if i > 0 { " " } else { "" };
            write!(f, "{sep}{sign}{:.6} {s}", c.abs())?;
        }
        Ok(())
    }
}

/// Second moments of the ledger symbols. Symbols are mutually independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolStats {
    pub squeezing: Squeezing,
    pub input_variance: (f64, f64),
    pub error_variance: [(f64, f64); 9],
}

impl SymbolStats {
    /// Coherent (vacuum-noise) input and deterministic errors.
    pub fn new(squeezing: Squeezing) -> Self {
        SymbolStats { squeezing, input_variance: (VACUUM_VARIANCE, VACUUM_VARIANCE), error_variance: [(0.0, 0.0); 9] }
    }

    pub fn variance(&self, sym: Symbol) -> f64 {
        match sym {
            Symbol::Input(Quadrature::X) => self.input_variance.0,
            Symbol::Input(Quadrature::P) => self.input_variance.1,
            Symbol::Ancilla(k, _) => {
                let e = f64::from(sym.squeeze_exponent());
                VACUUM_VARIANCE * (2.0 * e * self.squeezing.get(k)).exp()
            }
            Symbol::Error(j, Quadrature::X) => self.error_variance[j - 1].0,
            Symbol::Error(j, Quadrature::P) => self.error_variance[j - 1].1,
        }
    }
}

/// Concrete values of the ledger symbols. Ancilla entries are physical
/// quadrature values, squeezing already included.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymbolValues {
    pub input: (f64, f64),
    pub ancillas: [(f64, f64); 8],
    pub errors: [(f64, f64); 9],
}

impl SymbolValues {
    pub fn value(&self, sym: Symbol) -> f64 {
        let pick = |pair: (f64, f64), q| if q == Quadrature::X { pair.0 } else { pair.1 };
        match sym {
            Symbol::Input(q) => pick(self.input, q),
            Symbol::Ancilla(k, q) => pick(self.ancillas[k - 1], q),
            Symbol::Error(j, q) => pick(self.errors[j - 1], q),
        }
    }
}

/// Linear forms for every quadrature of an n-mode register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerSet {
    x: Vec<LinearForm>,
    p: Vec<LinearForm>,
}

impl LedgerSet {
    pub fn n_modes(&self) -> usize {
        self.x.len()
    }

    /// Form of quadrature `q` of mode `mode` (1-based).
    pub fn get(&self, mode: usize, q: Quadrature) -> &LinearForm {
        match q {
            Quadrature::X => &self.x[mode - 1],
            Quadrature::P => &self.p[mode - 1],
        }
    }

    pub fn x(&self, mode: usize) -> &LinearForm {
        self.get(mode, Quadrature::X)
    }

    pub fn p(&self, mode: usize) -> &LinearForm {
        self.get(mode, Quadrature::P)
    }

    fn map_linear(&self, m: &nalgebra::DMatrix<f64>) -> LedgerSet {
        let apply = |forms: &[LinearForm]| -> Vec<LinearForm> {
            (0..m.nrows())
                .map(|i| {
                    let mut out = LinearForm::zero();
                    for (j, f) in forms.iter().enumerate() {
                        let c = m[(i, j)];
                        if c != 0.0 {
                            out.add_scaled(f, c);
                        }
                    }
                    out.pruned(PRUNE_TOLERANCE)
                })
                .collect()
        };
        LedgerSet { x: apply(&self.x), p: apply(&self.p) }
    }
}

/// Encoded quadratures of the nine-mode code.
pub fn encode_ledger() -> LedgerSet {
    let sources = LedgerSet {
        x: (0..9).map(|m| LinearForm::symbol(source_symbol(m, Quadrature::X))).collect(),
        p: (0..9).map(|m| LinearForm::symbol(source_symbol(m, Quadrature::P))).collect(),
    };
    sources.map_linear(build_encoder_matrix().matrix())
}

/// Decoded quadratures after an error displacement on every channel `j`
/// with `errors[j - 1]` set.
pub fn decode_ledger(errors: [bool; 9]) -> LedgerSet {
    let mut channel = encode_ledger();
    for (j, &on) in errors.iter().enumerate() {
        if on {
            channel.x[j].add_term(Symbol::Error(j + 1, Quadrature::X), 1.0);
            channel.p[j].add_term(Symbol::Error(j + 1, Quadrature::P), 1.0);
        }
    }
    channel.map_linear(&build_encoder_matrix().matrix().transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-14;

    #[test]
    fn squeeze_exponents() {
        assert_eq!(Symbol::Ancilla(1, Quadrature::X).squeeze_exponent(), -1);
        assert_eq!(Symbol::Ancilla(1, Quadrature::P).squeeze_exponent(), 1);
        assert_eq!(Symbol::Ancilla(2, Quadrature::X).squeeze_exponent(), 1);
        assert_eq!(Symbol::Ancilla(2, Quadrature::P).squeeze_exponent(), -1);
        assert_eq!(Symbol::Input(Quadrature::X).squeeze_exponent(), 0);
    }

    #[test]
    fn decoding_without_errors_recovers_sources() {
        let d = decode_ledger([false; 9]);
        for m in 0..9 {
            for q in [Quadrature::X, Quadrature::P] {
                let f = d.get(m + 1, q);
                assert_eq!(f.len(), 1, "mode {} {:?}: {f}", m + 1, q);
                assert!((f.coefficient(source_symbol(m, q)) - 1.0).abs() < TOL);
            }
        }
    }

    #[test]
    fn decoded_input_mode_averages_errors() {
        let d = decode_ledger([true; 9]);
        for j in 1..=9 {
            assert!((d.x(1).coefficient(Symbol::Error(j, Quadrature::X)) - 1.0 / 3.0).abs() < TOL);
            assert!((d.p(1).coefficient(Symbol::Error(j, Quadrature::P)) - 1.0 / 3.0).abs() < TOL);
        }
    }

    #[test]
    fn encoded_variance_matches_vacuum_at_zero_squeezing() {
        let e = encode_ledger();
        let stats = SymbolStats::new(Squeezing::zero());
        for m in 1..=9 {
            assert!((e.x(m).variance(&stats) - 0.25).abs() < TOL);
            assert!((e.p(m).variance(&stats) - 0.25).abs() < TOL);
        }
    }

    #[test]
    fn symbol_labels() {
        assert_eq!(Symbol::Ancilla(3, Quadrature::P).to_string(), "p_an3");
        assert_eq!(Symbol::Error(7, Quadrature::X).to_string(), "x_err7");
        assert_eq!(Symbol::Input(Quadrature::X).to_string(), "x_in");
    }
}
