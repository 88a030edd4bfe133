use nalgebra::DMatrix;

use crate::error::{QecError, Result};

/// Real orthogonal matrix acting identically on the x and p quadratures of a
/// set of modes (a passive linear-optics network without phase shifts).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMatrix {
    m: DMatrix<f64>,
}

impl ModeMatrix {
    pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;

    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(QecError::DimensionMismatch { expected: m.nrows(), actual: m.ncols() });
        }
        if m.nrows() == 0 {
            return Err(QecError::EmptyRegister);
        }
        let deviation = orthogonality_deviation(&m);
        if deviation > Self::ORTHOGONALITY_TOLERANCE {
            return Err(QecError::NotOrthogonal { deviation });
        }
        Ok(ModeMatrix { m })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(QecError::InvalidParameter("mode matrix must be square".into()));
        }
        Self::new(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
    }

    pub fn identity(k: usize) -> Self {
        ModeMatrix { m: DMatrix::identity(k, k) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.m[(row, col)]
    }

    /// The inverse network, which for an orthogonal matrix is its transpose.
    pub fn inverse(&self) -> ModeMatrix {
        ModeMatrix { m: self.m.transpose() }
    }

    /// `self · other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &ModeMatrix) -> Result<ModeMatrix> {
        if self.dim() != other.dim() {
            return Err(QecError::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        ModeMatrix::new(&self.m * &other.m)
    }

    /// Embeds this `K×K` matrix into an `n×n` identity at the listed modes.
    pub fn embed(&self, n: usize, modes: &[usize]) -> Result<ModeMatrix> {
        validate_modes(modes, n)?;
        if modes.len() != self.dim() {
            return Err(QecError::DimensionMismatch { expected: self.dim(), actual: modes.len() });
        }
        let mut full = DMatrix::identity(n, n);
        for (i, &a) in modes.iter().enumerate() {
            for (j, &b) in modes.iter().enumerate() {
                full[(a, b)] = self.m[(i, j)];
            }
        }
        Ok(ModeMatrix { m: full })
    }

    /// Phase-space symplectic matrix for an `n`-mode register with this
    /// matrix applied on `modes` (x block and p block alike).
    pub fn symplectic(&self, n: usize, modes: &[usize]) -> Result<DMatrix<f64>> {
        validate_modes(modes, n)?;
        if modes.len() != self.dim() {
            return Err(QecError::DimensionMismatch { expected: self.dim(), actual: modes.len() });
        }
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for (i, &a) in modes.iter().enumerate() {
            for (j, &b) in modes.iter().enumerate() {
                let v = self.m[(i, j)];
                s[(2 * a, 2 * b)] = v;
                s[(2 * a + 1, 2 * b + 1)] = v;
            }
        }
        Ok(s)
    }
}

pub(crate) fn orthogonality_deviation(m: &DMatrix<f64>) -> f64 {
    let k = m.nrows();
    let prod = m.transpose() * m;
    (prod - DMatrix::<f64>::identity(k, k)).amax()
}

pub(crate) fn validate_modes(modes: &[usize], n: usize) -> Result<()> {
    for (i, &a) in modes.iter().enumerate() {
        if a >= n {
            return Err(QecError::ModeOutOfRange { mode: a, n_modes: n });
        }
        if modes[..i].contains(&a) {
            return Err(QecError::DuplicateMode(a));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn rejects_non_orthogonal() {
        let err = ModeMatrix::from_rows(&[&[1.0, 0.1], &[0.0, 1.0]]).unwrap_err();
        assert!(matches!(err, QecError::NotOrthogonal { .. }));
    }

    #[test]
    fn splitter_inverse_is_transpose() {
        let bs = ModeMatrix::from_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]]).unwrap();
        let id = bs.compose(&bs.inverse()).unwrap();
        assert!((id.matrix() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
    }

    #[test]
    fn embed_checks_modes() {
        let bs = ModeMatrix::identity(2);
        assert!(matches!(bs.embed(3, &[0, 0]), Err(QecError::DuplicateMode(0))));
        assert!(matches!(bs.embed(3, &[0, 3]), Err(QecError::ModeOutOfRange { .. })));
    }
}
