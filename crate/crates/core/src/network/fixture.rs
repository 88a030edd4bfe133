//! Closed-form coefficients as printed in the reference derivation, typed
//! in by hand. These are compared against the computed ledger by
//! [`ledger_check`](super::ledger_check); nothing here is derived.

use std::fmt;

use serde::Serialize;

use super::ledger::{Quadrature, Symbol};

/// `sign · (num/den) · √(root_num/root_den)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Radical {
    pub sign: i8,
    pub num: u32,
    pub den: u32,
    pub root_num: u32,
    pub root_den: u32,
}

impl Radical {
    pub const fn new(sign: i8, num: u32, den: u32, root_num: u32, root_den: u32) -> Self {
        Radical { sign, num, den, root_num, root_den }
    }

    pub const fn neg(self) -> Self {
        Radical { sign: -self.sign, ..self }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign) * f64::from(self.num) / f64::from(self.den)
            * (f64::from(self.root_num) / f64::from(self.root_den)).sqrt()
    }
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        write!(f, "{sign}{}/{}", self.num, self.den)?;
        if self.root_num != self.root_den {
            write!(f, "·√({}/{})", self.root_num, self.root_den)?;
        }
        Ok(())
    }
}

pub const ONE: Radical = Radical::new(1, 1, 1, 1, 1);
pub const THIRD: Radical = Radical::new(1, 1, 3, 1, 1);
/// √2/3
pub const SQRT2_OVER_3: Radical = Radical::new(1, 1, 3, 2, 1);
/// √(2/3)
pub const SQRT_2_3: Radical = Radical::new(1, 1, 1, 2, 3);
/// √(1/6)
pub const SQRT_1_6: Radical = Radical::new(1, 1, 1, 1, 6);
/// √(1/2)
pub const SQRT_1_2: Radical = Radical::new(1, 1, 1, 1, 2);
/// 1/(3√2)
pub const INV_3_SQRT2: Radical = Radical::new(1, 1, 3, 1, 2);
/// 1/√18
pub const SQRT_1_18: Radical = Radical::new(1, 1, 1, 1, 18);
pub const SQRT2: Radical = Radical::new(1, 1, 1, 2, 1);
/// √(3/2)
pub const SQRT_3_2: Radical = Radical::new(1, 1, 1, 3, 2);
pub const SQRT6: Radical = Radical::new(1, 1, 1, 6, 1);
/// 3/√2
pub const THREE_OVER_SQRT2: Radical = Radical::new(1, 3, 1, 1, 2);
/// 1/(2√6)
pub const INV_2_SQRT6: Radical = Radical::new(1, 1, 2, 1, 6);
/// √2/4
pub const SQRT2_OVER_4: Radical = Radical::new(1, 1, 4, 2, 1);

/// One printed term. `exponent` is the sign of the printed squeezing
/// factor `e^{±r_k}` (0 when there is none).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrintedTerm {
    pub symbol: Symbol,
    pub coefficient: Radical,
    pub exponent: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedForm {
    pub mode: usize,
    pub quadrature: Quadrature,
    pub terms: Vec<PrintedTerm>,
}

/// A printed correlation `Σ w_i q_i` of encoded quadratures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedCombination {
    pub label: &'static str,
    pub quadrature: Quadrature,
    pub weights: [i8; 9],
    pub terms: Vec<PrintedTerm>,
}

/// Printed output of mode 1 after correcting an error on `channel` with
/// the listed detectors, minus the input quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedResidual {
    pub channel: usize,
    pub quadrature: Quadrature,
    pub detectors: Vec<usize>,
    pub terms: Vec<PrintedTerm>,
    /// Set for printed lines known to disagree with the linear algebra.
    pub erratum: Option<&'static str>,
}

/// Mode (1-based) and quadrature read by each detector, indexed by
/// detector label minus one.
pub const DETECTOR_READOUTS: [(usize, Quadrature); 8] = [
    (4, Quadrature::X),
    (2, Quadrature::P),
    (3, Quadrature::P),
    (7, Quadrature::X),
    (5, Quadrature::P),
    (6, Quadrature::P),
    (8, Quadrature::P),
    (9, Quadrature::P),
];

use Quadrature::{P, X};

const E_MINUS: i8 = -1;
const E_PLUS: i8 = 1;

fn inp(q: Quadrature, c: Radical) -> PrintedTerm {
    PrintedTerm { symbol: Symbol::Input(q), coefficient: c, exponent: 0 }
}

fn an(k: usize, q: Quadrature, c: Radical, exponent: i8) -> PrintedTerm {
    PrintedTerm { symbol: Symbol::Ancilla(k, q), coefficient: c, exponent }
}

fn err(j: usize, q: Quadrature, c: Radical) -> PrintedTerm {
    PrintedTerm { symbol: Symbol::Error(j, q), coefficient: c, exponent: 0 }
}

fn form(mode: usize, quadrature: Quadrature, terms: Vec<PrintedTerm>) -> PrintedForm {
    PrintedForm { mode, quadrature, terms }
}

/// The eighteen encoded quadratures.
pub fn encoded_forms() -> Vec<PrintedForm> {
    vec![
        form(1, X, vec![inp(X, THIRD), an(1, X, SQRT2_OVER_3, E_MINUS), an(2, X, SQRT_2_3, E_PLUS)]),
        form(1, P, vec![inp(P, THIRD), an(1, P, SQRT2_OVER_3, E_PLUS), an(2, P, SQRT_2_3, E_MINUS)]),
        form(
            2,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, SQRT2_OVER_3, E_MINUS),
                an(2, X, SQRT_1_6.neg(), E_PLUS),
                an(3, X, SQRT_1_2, E_PLUS),
            ],
        ),
        form(
            2,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, SQRT2_OVER_3, E_PLUS),
                an(2, P, SQRT_1_6.neg(), E_MINUS),
                an(3, P, SQRT_1_2, E_MINUS),
            ],
        ),
        form(
            3,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, SQRT2_OVER_3, E_MINUS),
                an(2, X, SQRT_1_6.neg(), E_PLUS),
                an(3, X, SQRT_1_2.neg(), E_PLUS),
            ],
        ),
        form(
            3,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, SQRT2_OVER_3, E_PLUS),
                an(2, P, SQRT_1_6.neg(), E_MINUS),
                an(3, P, SQRT_1_2.neg(), E_MINUS),
            ],
        ),
        form(
            4,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6, E_MINUS),
                an(5, X, SQRT_2_3, E_PLUS),
            ],
        ),
        form(
            4,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6, E_PLUS),
                an(5, P, SQRT_2_3, E_MINUS),
            ],
        ),
        form(
            5,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6, E_MINUS),
                an(5, X, SQRT_1_6.neg(), E_PLUS),
                an(6, X, SQRT_1_2, E_PLUS),
            ],
        ),
        form(
            5,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6, E_PLUS),
                an(5, P, SQRT_1_6.neg(), E_MINUS),
                an(6, P, SQRT_1_2, E_MINUS),
            ],
        ),
        form(
            6,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6, E_MINUS),
                an(5, X, SQRT_1_6.neg(), E_PLUS),
                an(6, X, SQRT_1_2.neg(), E_PLUS),
            ],
        ),
        form(
            6,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6, E_PLUS),
                an(5, P, SQRT_1_6.neg(), E_MINUS),
                an(6, P, SQRT_1_2.neg(), E_MINUS),
            ],
        ),
        form(
            7,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6.neg(), E_MINUS),
                an(7, X, SQRT_2_3, E_PLUS),
            ],
        ),
        form(
            7,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6.neg(), E_PLUS),
                an(7, P, SQRT_2_3, E_MINUS),
            ],
        ),
        form(
            8,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6.neg(), E_MINUS),
                an(7, X, SQRT_1_6.neg(), E_PLUS),
                an(8, X, SQRT_1_2, E_PLUS),
            ],
        ),
        form(
            8,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6.neg(), E_PLUS),
                an(7, P, SQRT_1_6.neg(), E_MINUS),
                an(8, P, SQRT_1_2, E_MINUS),
            ],
        ),
        form(
            9,
            X,
            vec![
                inp(X, THIRD),
                an(1, X, INV_3_SQRT2.neg(), E_MINUS),
                an(4, X, SQRT_1_6.neg(), E_MINUS),
                an(7, X, SQRT_1_6.neg(), E_PLUS),
                an(8, X, SQRT_1_2.neg(), E_PLUS),
            ],
        ),
        form(
            9,
            P,
            vec![
                inp(P, THIRD),
                an(1, P, INV_3_SQRT2.neg(), E_PLUS),
                an(4, P, SQRT_1_6.neg(), E_PLUS),
                an(7, P, SQRT_1_6.neg(), E_MINUS),
                an(8, P, SQRT_1_2.neg(), E_MINUS),
            ],
        ),
    ]
}

/// Decoded quadratures with every error switch on; setting a switch to
/// zero removes the matching error term.
pub fn decoded_forms() -> Vec<PrintedForm> {
    let mut out = Vec::with_capacity(18);
    for q in [X, P] {
        // Squeezed ancilla quadratures carry e^{-r}; the conjugate e^{+r}.
        let (sq_x, sq_p) = if q == X { (E_MINUS, E_PLUS) } else { (E_PLUS, E_MINUS) };

        let mut t = vec![inp(q, ONE)];
        t.extend((1..=9).map(|k| err(k, q, THIRD)));
        out.push(form(1, q, t));

        out.push(form(
            2,
            q,
            vec![an(2, q, ONE, sq_p), err(1, q, SQRT_2_3), err(2, q, SQRT_1_6.neg()), err(3, q, SQRT_1_6.neg())],
        ));
        out.push(form(3, q, vec![an(3, q, ONE, sq_p), err(2, q, SQRT_1_2), err(3, q, SQRT_1_2.neg())]));

        let mut t = vec![an(1, q, ONE, sq_x)];
        t.extend((1..=3).map(|k| err(k, q, SQRT2_OVER_3)));
        t.extend((4..=9).map(|k| err(k, q, SQRT_1_18.neg())));
        out.push(form(4, q, t));

        out.push(form(
            5,
            q,
            vec![an(5, q, ONE, sq_p), err(4, q, SQRT_2_3), err(5, q, SQRT_1_6.neg()), err(6, q, SQRT_1_6.neg())],
        ));
        out.push(form(6, q, vec![an(6, q, ONE, sq_p), err(5, q, SQRT_1_2), err(6, q, SQRT_1_2.neg())]));

        let mut t = vec![an(4, q, ONE, sq_x)];
        t.extend((4..=6).map(|k| err(k, q, SQRT_1_6)));
        t.extend((7..=9).map(|k| err(k, q, SQRT_1_6.neg())));
        out.push(form(7, q, t));

        out.push(form(
            8,
            q,
            vec![an(7, q, ONE, sq_p), err(7, q, SQRT_2_3), err(8, q, SQRT_1_6.neg()), err(9, q, SQRT_1_6.neg())],
        ));
        out.push(form(9, q, vec![an(8, q, ONE, sq_p), err(8, q, SQRT_1_2), err(9, q, SQRT_1_2.neg())]));
    }
    out
}

/// The eight printed correlations of the encoded state.
pub fn nullifier_forms() -> Vec<PrintedCombination> {
    let c = |label, quadrature, weights, terms| PrintedCombination { label, quadrature, weights, terms };
    vec![
        c(
            "x1+x2+x3-(x4+x5+x6)",
            X,
            [1, 1, 1, -1, -1, -1, 0, 0, 0],
            vec![an(1, X, THREE_OVER_SQRT2, E_MINUS), an(4, X, SQRT_3_2.neg(), E_MINUS)],
        ),
        c("x4+x5+x6-(x7+x8+x9)", X, [0, 0, 0, 1, 1, 1, -1, -1, -1], vec![an(4, X, SQRT6, E_MINUS)]),
        c(
            "p1-p2",
            P,
            [1, -1, 0, 0, 0, 0, 0, 0, 0],
            vec![an(2, P, SQRT_3_2, E_MINUS), an(3, P, SQRT_1_2.neg(), E_MINUS)],
        ),
        c("p2-p3", P, [0, 1, -1, 0, 0, 0, 0, 0, 0], vec![an(3, P, SQRT2, E_MINUS)]),
        c(
            "p4-p5",
            P,
            [0, 0, 0, 1, -1, 0, 0, 0, 0],
            vec![an(5, P, SQRT_3_2, E_MINUS), an(6, P, SQRT_1_2.neg(), E_MINUS)],
        ),
        c("p5-p6", P, [0, 0, 0, 0, 1, -1, 0, 0, 0], vec![an(6, P, SQRT2, E_MINUS)]),
        c(
            "p7-p8",
            P,
            [0, 0, 0, 0, 0, 0, 1, -1, 0],
            vec![an(7, P, SQRT_3_2, E_MINUS), an(8, P, SQRT_1_2.neg(), E_MINUS)],
        ),
        c("p8-p9", P, [0, 0, 0, 0, 0, 0, 0, 1, -1], vec![an(8, P, SQRT2, E_MINUS)]),
    ]
}

/// Printed single-detector output lines for errors on each channel.
pub fn residual_lines() -> Vec<PrintedResidual> {
    let line = |channel, quadrature, detector, k, c: Radical, erratum| PrintedResidual {
        channel,
        quadrature,
        detectors: vec![detector],
        terms: vec![an(k, quadrature, c, E_MINUS)],
        erratum,
    };
    let mode5 = Some("printed with a minus sign; the decoded form of p5' gives +√(2/3), as for an error on mode 6");
    vec![
        line(1, X, 1, 1, SQRT_1_2.neg(), None),
        line(1, P, 2, 2, SQRT_1_6.neg(), None),
        line(2, X, 1, 1, SQRT_1_2.neg(), None),
        line(2, P, 2, 2, SQRT_2_3, None),
        line(2, P, 3, 3, SQRT2_OVER_3.neg(), None),
        line(3, X, 1, 1, SQRT_1_2.neg(), None),
        line(3, P, 2, 2, SQRT_2_3, None),
        line(3, P, 3, 3, SQRT2_OVER_3, None),
        line(4, X, 1, 1, SQRT2, None),
        line(4, X, 4, 4, SQRT_2_3.neg(), None),
        line(4, P, 5, 5, SQRT_1_6.neg(), None),
        line(5, X, 1, 1, SQRT2, None),
        line(5, X, 4, 4, SQRT_2_3.neg(), None),
        line(5, P, 5, 5, SQRT_2_3.neg(), mode5),
        line(5, P, 6, 6, SQRT2_OVER_3.neg(), None),
        line(6, X, 1, 1, SQRT2, None),
        line(6, X, 4, 4, SQRT_2_3.neg(), None),
        line(6, P, 5, 5, SQRT_2_3, None),
        line(6, P, 6, 6, SQRT2_OVER_3, None),
        line(7, X, 1, 1, SQRT2, None),
        line(7, X, 4, 4, SQRT_2_3, None),
        line(7, P, 7, 7, SQRT_1_6.neg(), None),
        line(8, X, 1, 1, SQRT2, None),
        line(8, X, 4, 4, SQRT_2_3, None),
        line(8, P, 7, 7, SQRT_2_3, None),
        line(8, P, 8, 8, SQRT2_OVER_3.neg(), None),
        line(9, X, 1, 1, SQRT2, None),
        line(9, X, 4, 4, SQRT_2_3, None),
        line(9, P, 7, 7, SQRT_2_3, None),
        line(9, P, 8, 8, SQRT2_OVER_3, None),
    ]
}

/// Printed output for an error on channel 2 corrected in p with both
/// detectors 2 and 3, weighted for equal squeezing.
pub fn optimal_residual_line() -> PrintedResidual {
    PrintedResidual {
        channel: 2,
        quadrature: P,
        detectors: vec![2, 3],
        terms: vec![an(2, P, INV_2_SQRT6, E_MINUS), an(3, P, SQRT2_OVER_4.neg(), E_MINUS)],
        erratum: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_values() {
        assert!((SQRT2_OVER_3.value() - 2f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((INV_3_SQRT2.neg().value() + 1.0 / (3.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!((SQRT_1_18.value() - INV_3_SQRT2.value()).abs() < 1e-15);
        assert_eq!(SQRT_2_3.to_string(), "1/1·√(2/3)");
    }

    #[test]
    fn fixture_sizes() {
        assert_eq!(encoded_forms().len(), 18);
        assert_eq!(decoded_forms().len(), 18);
        assert_eq!(nullifier_forms().len(), 8);
        assert_eq!(residual_lines().iter().filter(|l| l.erratum.is_some()).count(), 1);
    }
}
