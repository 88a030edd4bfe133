use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::mode_matrix::{validate_modes, ModeMatrix};
use super::{COV_TOLERANCE, HOMODYNE_VARIANCE_FLOOR, PHYSICALITY_TOLERANCE};
use crate::error::{QecError, Result};
use crate::units::VACUUM_VARIANCE;

/// Which quadrature of a single-mode squeezed vacuum is squeezed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SqueezeAxis {
    X,
    P,
}

/// A rotated quadrature `cos(θ)·x + sin(θ)·p` of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureTarget {
    pub mode: usize,
    pub angle: f64,
}

impl QuadratureTarget {
    pub fn x(mode: usize) -> Self {
        QuadratureTarget { mode, angle: 0.0 }
    }

    pub fn p(mode: usize) -> Self {
        QuadratureTarget { mode, angle: std::f64::consts::FRAC_PI_2 }
    }

    fn direction(&self, n_modes: usize) -> Result<DVector<f64>> {
        if self.mode >= n_modes {
            return Err(QecError::ModeOutOfRange { mode: self.mode, n_modes });
        }
        let mut c = DVector::zeros(2 * n_modes);
        c[2 * self.mode] = self.angle.cos();
        c[2 * self.mode + 1] = self.angle.sin();
        Ok(c)
    }
}

/// Mean vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from its moments, symmetrizing the covariance and
    /// checking positivity and the uncertainty principle.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if mean.is_empty() {
            return Err(QecError::EmptyRegister);
        }
        if !mean.len().is_multiple_of(2) {
            return Err(QecError::InvalidParameter("mean vector length must be even".into()));
        }
        if cov.nrows() != mean.len() || cov.ncols() != mean.len() {
            return Err(QecError::DimensionMismatch { expected: mean.len(), actual: cov.nrows() });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(QecError::InvalidParameter("non-finite moment".into()));
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > COV_TOLERANCE {
            return Err(QecError::InvariantViolation(format!("covariance asymmetric by {asym:e}")));
        }
        let state = Self::from_parts(mean, cov);
        state.check_physical()?;
        Ok(state)
    }

    /// Internal constructor for moments produced by physicality-preserving
    /// operations; only symmetrizes.
    pub(crate) fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        let cov = (&cov + cov.transpose()) * 0.5;
        GaussianState { mean, cov }
    }

    pub fn vacuum(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(QecError::EmptyRegister);
        }
        Ok(GaussianState { mean: DVector::zeros(2 * n), cov: DMatrix::identity(2 * n, 2 * n) * VACUUM_VARIANCE })
    }

    /// Single-mode squeezed vacuum with variance `e^{-2r}/4` on the squeezed
    /// axis and `e^{2r}/4` on the other.
    pub fn squeezed(r: f64, axis: SqueezeAxis) -> Result<Self> {
        if !r.is_finite() {
            return Err(QecError::InvalidParameter(format!("squeezing must be finite, got {r}")));
        }
        if r < 0.0 {
            return Err(QecError::InvalidParameter(format!("negative squeezing {r}; swap the axis instead")));
        }
        let squeezed = (-2.0 * r).exp() * VACUUM_VARIANCE;
        let anti = (2.0 * r).exp() * VACUUM_VARIANCE;
        let (vx, vp) = match axis {
            SqueezeAxis::X => (squeezed, anti),
            SqueezeAxis::P => (anti, squeezed),
        };
        Ok(GaussianState { mean: DVector::zeros(2), cov: DMatrix::from_diagonal(&DVector::from_vec(vec![vx, vp])) })
    }

    /// Coherent state with quadrature means `(x, p)`.
    pub fn coherent(x: f64, p: f64) -> Self {
        GaussianState { mean: DVector::from_vec(vec![x, p]), cov: DMatrix::identity(2, 2) * VACUUM_VARIANCE }
    }

    /// Product state; mode order follows the list order.
    pub fn tensor(states: &[GaussianState]) -> Result<Self> {
        if states.is_empty() {
            return Err(QecError::EmptyStateList);
        }
        let dim: usize = states.iter().map(|s| s.mean.len()).sum();
        let mut mean = DVector::zeros(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for s in states {
            let d = s.mean.len();
            mean.rows_mut(offset, d).copy_from(&s.mean);
            cov.view_mut((offset, offset), (d, d)).copy_from(&s.cov);
            offset += d;
        }
        Ok(GaussianState { mean, cov })
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `(x̄, p̄)` of one mode.
    pub fn mode_mean(&self, mode: usize) -> (f64, f64) {
        (self.mean[2 * mode], self.mean[2 * mode + 1])
    }

    /// 2×2 covariance block `[[Vxx, Vxp], [Vxp, Vpp]]` of one mode.
    pub fn mode_cov(&self, mode: usize) -> [[f64; 2]; 2] {
        let i = 2 * mode;
        [[self.cov[(i, i)], self.cov[(i, i + 1)]], [self.cov[(i + 1, i)], self.cov[(i + 1, i + 1)]]]
    }

    /// Reduced state of the listed modes, in the listed order.
    pub fn reduced(&self, modes: &[usize]) -> Result<Self> {
        validate_modes(modes, self.n_modes())?;
        if modes.is_empty() {
            return Err(QecError::EmptyRegister);
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| self.cov[(idx[a], idx[b])]);
        Ok(GaussianState { mean, cov })
    }

    /// Applies a phase-space linear map `S`: `μ → Sμ`, `V → S V Sᵀ`.
    pub(crate) fn transform(&self, s: &DMatrix<f64>) -> Self {
        let mean = s * &self.mean;
        let cov = s * &self.cov * s.transpose();
        Self::from_parts(mean, cov)
    }

    /// Passes the listed modes through an orthogonal network.
    pub fn apply_mode_matrix(&self, m: &ModeMatrix, modes: &[usize]) -> Result<Self> {
        let s = m.symplectic(self.n_modes(), modes)?;
        Ok(self.transform(&s))
    }

    pub fn displace(&self, mode: usize, dx: f64, dp: f64) -> Result<Self> {
        if mode >= self.n_modes() {
            return Err(QecError::ModeOutOfRange { mode, n_modes: self.n_modes() });
        }
        let mut out = self.clone();
        out.mean[2 * mode] += dx;
        out.mean[2 * mode + 1] += dp;
        Ok(out)
    }

    /// Variance `cᵀVc` of a rotated quadrature.
    pub fn marginal_variance(&self, target: QuadratureTarget) -> Result<f64> {
        let c = target.direction(self.n_modes())?;
        Ok(c.dot(&(&self.cov * &c)))
    }

    pub fn quadrature_mean(&self, target: QuadratureTarget) -> Result<f64> {
        let c = target.direction(self.n_modes())?;
        Ok(c.dot(&self.mean))
    }

    /// Mean of an arbitrary linear combination of quadratures (interleaved
    /// coefficient vector).
    pub fn linear_mean(&self, coefficients: &[f64]) -> Result<f64> {
        let c = self.coefficient_vector(coefficients)?;
        Ok(c.dot(&self.mean))
    }

    /// Variance of an arbitrary linear combination of quadratures.
    pub fn linear_variance(&self, coefficients: &[f64]) -> Result<f64> {
        let c = self.coefficient_vector(coefficients)?;
        Ok(c.dot(&(&self.cov * &c)))
    }

    /// Covariance between two linear combinations of quadratures.
    pub fn linear_covariance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        let a = self.coefficient_vector(a)?;
        let b = self.coefficient_vector(b)?;
        Ok(a.dot(&(&self.cov * &b)))
    }

    fn coefficient_vector(&self, coefficients: &[f64]) -> Result<DVector<f64>> {
        if coefficients.len() != self.mean.len() {
            return Err(QecError::DimensionMismatch { expected: self.mean.len(), actual: coefficients.len() });
        }
        Ok(DVector::from_column_slice(coefficients))
    }

    /// State of the remaining modes after a homodyne measurement of `target`
    /// returned `outcome`. The measured mode is removed; `None` when it was
    /// the only mode.
    pub fn homodyne_condition(&self, target: QuadratureTarget, outcome: f64) -> Result<Option<Self>> {
        let n = self.n_modes();
        let c = target.direction(n)?;
        let v = &self.cov * &c;
        let s = c.dot(&v);
        if !(s > 0.0) {
            return Err(QecError::InvariantViolation(format!("measured quadrature variance {s:e} is not positive")));
        }
        if n == 1 {
            return Ok(None);
        }
        let s = s.max(HOMODYNE_VARIANCE_FLOOR);
        let innovation = outcome - c.dot(&self.mean);
        let keep: Vec<usize> = (0..2 * n).filter(|&i| i / 2 != target.mode).collect();
        let k = keep.len();
        let mean = DVector::from_fn(k, |a, _| self.mean[keep[a]] + v[keep[a]] * innovation / s);
        let cov = DMatrix::from_fn(k, k, |a, b| self.cov[(keep[a], keep[b])] - v[keep[a]] * v[keep[b]] / s);
        Ok(Some(Self::from_parts(mean, cov)))
    }

    /// Samples a homodyne outcome from the exact Gaussian marginal and
    /// returns it with the conditioned remainder.
    pub fn homodyne_sample<R: Rng + ?Sized>(
        &self,
        target: QuadratureTarget,
        rng: &mut R,
    ) -> Result<(f64, Option<Self>)> {
        let mean = self.quadrature_mean(target)?;
        let var = self.marginal_variance(target)?;
        if !(var > 0.0) {
            return Err(QecError::InvariantViolation(format!("measured quadrature variance {var:e} is not positive")));
        }
        let z: f64 = rng.sample(StandardNormal);
        let outcome = mean + var.sqrt() * z;
        let rest = self.homodyne_condition(target, outcome)?;
        Ok((outcome, rest))
    }

    /// Symplectic eigenvalues in ascending order (one per mode).
    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n_modes();
        let eig = SymmetricEigen::new(self.cov.clone());
        if eig.eigenvalues.min() <= 0.0 {
            return Err(QecError::InvariantViolation("covariance is not positive definite".into()));
        }
        let sqrt_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
        let root = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
        let mut omega = DMatrix::zeros(2 * n, 2 * n);
        for m in 0..n {
            omega[(2 * m, 2 * m + 1)] = 1.0;
            omega[(2 * m + 1, 2 * m)] = -1.0;
        }
        // root·Ω·root is antisymmetric with eigenvalues ±iν.
        let a = &root * omega * &root;
        let gram = a.transpose() * &a;
        let gram = (&gram + gram.transpose()) * 0.5;
        let mut nu_sq: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
        nu_sq.sort_by(|a, b| a.total_cmp(b));
        Ok(nu_sq.chunks(2).map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt()).collect())
    }

    /// Checks positivity of the covariance and `ν ≥ 1/4` for every
    /// symplectic eigenvalue.
    pub fn check_physical(&self) -> Result<()> {
        let min_eig = SymmetricEigen::new(self.cov.clone()).eigenvalues.min();
        if min_eig < -COV_TOLERANCE {
            return Err(QecError::InvariantViolation(format!("covariance has negative eigenvalue {min_eig:e}")));
        }
        let nu = self.symplectic_eigenvalues()?;
        if let Some(&smallest) = nu.first() {
            if smallest < VACUUM_VARIANCE - PHYSICALITY_TOLERANCE {
                return Err(QecError::InvariantViolation(format!("symplectic eigenvalue {smallest} below 1/4")));
            }
        }
        Ok(())
    }
}
