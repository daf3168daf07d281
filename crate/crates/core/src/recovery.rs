//! Sparse recovery: iterative hard thresholding and orthogonal matching pursuit.

use crate::analysis::spectral_norm;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-4;
/// Relative eigenvalue cutoff for the OMP pseudo-inverse.
pub const PINV_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct RecoveryResult {
    pub estimate: CVector,
    pub iterations: usize,
    pub converged: bool,
    /// `||estimate - x|| / ||x||` once a ground truth is attached.
    pub relative_error: Option<f64>,
    /// Set by OMP when a least-squares solve fell back to the pseudo-inverse.
    pub rank_deficient: bool,
}

impl RecoveryResult {
    pub fn with_truth(mut self, truth: &CVector) -> Self {
        let denom = truth.norm();
        if denom > 0.0 {
            self.relative_error = Some((&self.estimate - truth).norm() / denom);
        }
        self
    }
}

/// Keeps the `s` largest-modulus entries; ties go to the lower index.
pub fn hard_threshold(x: &CVector, s: usize) -> CVector {
    if s >= x.len() {
        return x.clone();
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[b].norm().total_cmp(&x[a].norm()).then(a.cmp(&b)));
    let mut out = CVector::zeros(x.len());
    for &i in &order[..s] {
        out[i] = x[i];
    }
    out
}

fn check_shapes(phi: &CMatrix, y: &CVector, s: usize) -> Result<()> {
    if y.len() != phi.nrows() {
        return Err(Error::shape(format!("measurements of length {}", phi.nrows()), y.len()));
    }
    if s == 0 || s > phi.ncols() {
        return Err(Error::InvalidArgument(format!(
            "sparsity {s} outside 1..={}",
            phi.ncols()
        )));
    }
    Ok(())
}

/// Normalized iterative hard thresholding, step `1 / ||Phi||^2`, from zero.
pub fn iht(phi: &CMatrix, y: &CVector, s: usize, max_iters: usize, tol: f64) -> Result<RecoveryResult> {
    check_shapes(phi, y, s)?;
    let norm = spectral_norm(phi)?;
    if norm == 0.0 {
        return Err(Error::DegenerateOperator);
    }
    let step = C64::from(1.0 / (norm * norm));
    let phi_adj = phi.adjoint();

    let mut x = CVector::zeros(phi.ncols());
    for it in 1..=max_iters {
        let gradient = &phi_adj * (y - phi * &x);
        let next = hard_threshold(&(&x + gradient * step), s);
        let change = (&next - &x).norm();
        let scale = x.norm().max(1.0);
        x = next;
        let residual = (y - phi * &x).norm();
        if change <= tol * scale || residual <= tol {
            return Ok(RecoveryResult {
                estimate: x,
                iterations: it,
                converged: true,
                relative_error: None,
                rank_deficient: false,
            });
        }
    }
    Ok(RecoveryResult {
        estimate: x,
        iterations: max_iters,
        converged: false,
        relative_error: None,
        rank_deficient: false,
    })
}

/// Orthogonal matching pursuit with `s` greedy selections.
pub fn omp(phi: &CMatrix, y: &CVector, s: usize) -> Result<RecoveryResult> {
    check_shapes(phi, y, s)?;
    if s > phi.nrows() {
        return Err(Error::InvalidArgument(format!(
            "sparsity {s} exceeds the number of measurements {}",
            phi.nrows()
        )));
    }
    let n = phi.ncols();
    let col_norms: Vec<f64> = phi.column_iter().map(|c| c.norm()).collect();
    let stop = 1e-13 * y.norm();

    let mut support: Vec<usize> = Vec::with_capacity(s);
    let mut coeffs = CVector::zeros(0);
    let mut residual = y.clone();
    let mut rank_deficient = false;

    while support.len() < s && residual.norm() > stop {
        let corr = phi.adjoint() * &residual;
        let mut best: Option<(usize, f64)> = None;
        for j in (0..n).filter(|j| !support.contains(j) && col_norms[*j] > 0.0) {
            let score = corr[j].norm() / col_norms[j];
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((j, score));
            }
        }
        let Some((j, _)) = best else { break };
        support.push(j);

        let sub = CMatrix::from_columns(&support.iter().map(|&c| phi.column(c).into_owned()).collect::<Vec<_>>());
        let (solution, deficient) = least_squares(&sub, y);
        rank_deficient |= deficient;
        residual = y - &sub * &solution;
        coeffs = solution;
    }

    let mut estimate = CVector::zeros(n);
    for (k, &j) in support.iter().enumerate() {
        estimate[j] = coeffs[k];
    }
    Ok(RecoveryResult {
        estimate,
        iterations: support.len(),
        converged: true,
        relative_error: None,
        rank_deficient,
    })
}

/// Normal equations solved through a Hermitian eigendecomposition; modes
/// below `PINV_THRESHOLD` of the largest are dropped (pseudo-inverse).
fn least_squares(a: &CMatrix, y: &CVector) -> (CVector, bool) {
    let normal = a.adjoint() * a;
    let rhs = a.adjoint() * y;
    let (vals, vecs) = linalg::hermitian_eigen(&normal);
    let top = vals.iter().copied().fold(0.0, f64::max);
    let mut x = CVector::zeros(a.ncols());
    let mut deficient = false;
    for (k, &lambda) in vals.iter().enumerate() {
        if lambda <= PINV_THRESHOLD * top {
            deficient = true;
            continue;
        }
        let v = vecs.column(k);
        let coef = (v.adjoint() * &rhs)[(0, 0)] / lambda;
        x += v * coef;
    }
    (x, deficient)
}

/// `true` iff `||estimate - truth|| / ||truth|| <= threshold`.
pub fn recovery_success(truth: &CVector, result: &RecoveryResult, threshold: f64) -> Result<bool> {
    let denom = truth.norm();
    if denom == 0.0 {
        return Err(Error::InvalidArgument("ground truth must be nonzero".into()));
    }
    if truth.len() != result.estimate.len() {
        return Err(Error::shape(truth.len(), result.estimate.len()));
    }
    Ok((&result.estimate - truth).norm() / denom <= threshold)
}
