//! Dense complex linear algebra shared by the analysis and recovery code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Matrices whose smaller side is at most this use a full SVD.
pub const FULL_DECOMPOSITION_MAX_DIM: usize = 64;
pub const POWER_ITERATION_TOL: f64 = 1e-12;
pub const POWER_ITERATION_MAX_ITERS: usize = 10_000;

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max |(A* A - I)_{ij}|`.
pub fn unitarity_residual(a: &CMatrix) -> f64 {
    let n = a.ncols();
    let gram = a.adjoint() * a;
    max_abs_diff(&gram, &CMatrix::identity(n, n))
}

/// Unitary DFT matrix, entries `n^{-1/2} exp(-2 pi i jk / n)`.
pub fn dft_matrix(n: usize) -> CMatrix {
    let scale = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |j, k| {
        let angle = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
        C64::from_polar(scale, angle)
    })
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Largest singular value of `m` together with a unit right singular vector.
///
/// Uses a full SVD when the smaller dimension is at most 64, otherwise power
/// iteration on the smaller Gram matrix.
pub fn top_singular(m: &CMatrix) -> Result<(f64, CVector)> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok((0.0, CVector::zeros(cols)));
    }
    if rows.min(cols) <= FULL_DECOMPOSITION_MAX_DIM {
        let svd = m.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let (idx, sigma) =
            svd.singular_values
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |best, (i, s)| if s > best.1 { (i, s) } else { best },
                );
        let v = v_t.row(idx).adjoint();
        Ok((sigma, v))
    } else {
        power_iteration(m)
    }
}

fn power_iteration(m: &CMatrix) -> Result<(f64, CVector)> {
    let (rows, cols) = m.shape();
    let wide = cols > rows;
    let gram = if wide { m * m.adjoint() } else { m.adjoint() * m };
    let dim = gram.nrows();

    // Deterministic start with no special alignment to coordinate axes.
    let mut v = CVector::from_fn(dim, |i, _| {
        C64::new(
            1.0 + 0.1 * ((i * 7919) % 97) as f64 / 97.0,
            0.05 * ((i * 104_729) % 89) as f64 / 89.0,
        )
    });
    v /= C64::from(v.norm());

    let mut lambda = 0.0;
    for iter in 1..=POWER_ITERATION_MAX_ITERS {
        let w = &gram * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok((0.0, right_vector(m, wide, &v, 0.0)));
        }
        let next = w / C64::from(norm);
        let rayleigh = (next.adjoint() * &gram * &next)[(0, 0)].re;
        v = next;
        if iter > 1 && (rayleigh - lambda).abs() <= POWER_ITERATION_TOL * rayleigh.abs() {
            let sigma = rayleigh.max(0.0).sqrt();
            return Ok((sigma, right_vector(m, wide, &v, sigma)));
        }
        lambda = rayleigh;
    }
    Err(Error::NoConvergence {
        iterations: POWER_ITERATION_MAX_ITERS,
    })
}

fn right_vector(m: &CMatrix, wide: bool, v: &CVector, sigma: f64) -> CVector {
    if !wide {
        return v.clone();
    }
    if sigma == 0.0 {
        let mut e = CVector::zeros(m.ncols());
        e[0] = C64::from(1.0);
        return e;
    }
    let mut r = m.adjoint() * v;
    let n = r.norm();
    r /= C64::from(n);
    r
}

/// Euclidean norm of a complex slice.
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
