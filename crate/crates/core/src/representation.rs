//! Unitary and projective representations of finite groups.
//!
//! A [`Representation`] maps each group element to a unitary `n x n` matrix.
//! Permutation-like realizations (left regular, affine quasi-regular,
//! Weyl-Heisenberg, trivial) are evaluated on demand from index arithmetic;
//! explicit realizations such as conjugates keep one matrix per element.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{self, FiniteGroup, GroupKind};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Dimension cap for representations on C^G and C^p.
pub const MAX_DIM: usize = 4096;
/// Tolerance for the conjugating matrix in [`conjugate`].
pub const CONJUGATOR_UNITARY_TOL: f64 = 1e-10;

const COCYCLE_PIVOT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepKind {
    Ordinary,
    Projective,
}

/// The action of a single group element on C^n.
#[derive(Clone, Debug)]
pub enum Action {
    /// `(A x)_j = phase_j * x[source_j]`, `phase` all ones when absent.
    Monomial {
        source: Vec<usize>,
        phase: Option<Vec<C64>>,
    },
    /// `(A x)_j = d_j x_j`.
    Diagonal(Vec<C64>),
    Dense(CMatrix),
}

impl Action {
    pub fn dim(&self) -> usize {
        match self {
            Action::Monomial { source, .. } => source.len(),
            Action::Diagonal(d) => d.len(),
            Action::Dense(m) => m.nrows(),
        }
    }

    pub fn apply(&self, x: &CVector) -> CVector {
        match self {
            Action::Monomial { source, phase } => match phase {
                Some(ph) => CVector::from_iterator(source.len(), source.iter().zip(ph).map(|(&s, &p)| p * x[s])),
                None => CVector::from_iterator(source.len(), source.iter().map(|&s| x[s])),
            },
            Action::Diagonal(d) => CVector::from_iterator(d.len(), d.iter().zip(x.iter()).map(|(a, b)| a * b)),
            Action::Dense(m) => m * x,
        }
    }

    /// The single nonzero `(column, value)` of row `j` for monomial and
    /// diagonal actions; `None` for dense ones.
    pub fn sparse_row(&self, j: usize) -> Option<(usize, C64)> {
        match self {
            Action::Monomial { source, phase } => {
                Some((source[j], phase.as_ref().map_or(C64::new(1.0, 0.0), |p| p[j])))
            }
            Action::Diagonal(d) => Some((j, d[j])),
            Action::Dense(_) => None,
        }
    }

    /// Row `j` of the matrix, as a dense vector.
    pub fn row(&self, j: usize) -> Vec<C64> {
        let n = self.dim();
        match self {
            Action::Monomial { source, phase } => {
                let mut r = vec![C64::new(0.0, 0.0); n];
                r[source[j]] = phase.as_ref().map_or(C64::new(1.0, 0.0), |p| p[j]);
                r
            }
            Action::Diagonal(d) => {
                let mut r = vec![C64::new(0.0, 0.0); n];
                r[j] = d[j];
                r
            }
            Action::Dense(m) => m.row(j).iter().copied().collect(),
        }
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        match self {
            Action::Dense(m) => m.clone(),
            _ => CMatrix::from_fn(n, n, |i, j| self.row(i)[j]),
        }
    }
}

#[derive(Clone)]
enum Realization {
    LeftRegular,
    AffineQuasiRegular { p: u64 },
    Trivial,
    WeylHeisenberg { n: usize },
    Explicit(Arc<Vec<Action>>),
}

/// A (projective) unitary representation `g -> pi(g)` on C^n.
#[derive(Clone)]
pub struct Representation {
    group: FiniteGroup,
    dim: usize,
    kind: RepKind,
    label: String,
    realization: Realization,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("label", &self.label)
            .field("group", &self.group.label())
            .field("dim", &self.dim)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Representation {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// A representation from explicit matrices, one per group element in
    /// index order. Only shapes are checked; use [`Representation::residuals`]
    /// to test the representation laws.
    pub fn from_matrices(
        group: &FiniteGroup,
        matrices: Vec<CMatrix>,
        kind: RepKind,
        label: impl Into<String>,
    ) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::shape(
                format!("{} matrices", group.order()),
                format!("{} matrices", matrices.len()),
            ));
        }
        let dim = matrices.first().map_or(0, CMatrix::nrows);
        if let Some(bad) = matrices.iter().find(|m| m.shape() != (dim, dim)) {
            return Err(Error::shape(
                format!("{dim}x{dim}"),
                format!("{}x{}", bad.nrows(), bad.ncols()),
            ));
        }
        Ok(Representation {
            group: group.clone(),
            dim,
            kind,
            label: label.into(),
            realization: Realization::Explicit(Arc::new(matrices.into_iter().map(Action::Dense).collect())),
        })
    }

    /// Action of element `g`.
    pub fn action(&self, g: usize) -> Action {
        assert!(g < self.group.order(), "element {g} out of range");
        match &self.realization {
            Realization::LeftRegular => {
                let gi = self.group.inv(g);
                Action::Monomial {
                    source: (0..self.dim).map(|h| self.group.mul(gi, h)).collect(),
                    phase: None,
                }
            }
            Realization::AffineQuasiRegular { p } => {
                let (k, l) = self.group.affine_pair(g).expect("affine group");
                let l_inv = (1..*p).find(|x| (x * l) % p == 1).expect("prime modulus");
                Action::Monomial {
                    source: (0..*p).map(|j| ((l_inv * ((j + p - k) % p)) % p) as usize).collect(),
                    phase: None,
                }
            }
            Realization::Trivial => Action::Monomial {
                source: (0..self.dim).collect(),
                phase: None,
            },
            Realization::WeylHeisenberg { n } => {
                let (k, freq) = self.group.product_pair(g).expect("product group");
                Action::Monomial {
                    source: (0..*n).map(|j| (j + n - k) % n).collect(),
                    phase: Some((0..*n).map(|j| root_of_unity(freq * j, *n)).collect()),
                }
            }
            Realization::Explicit(actions) => actions[g].clone(),
        }
    }

    /// Dense matrix of `pi(g)`.
    pub fn matrix_of(&self, g: usize) -> CMatrix {
        self.action(g).to_dense()
    }

    /// `pi(g) x` without forming the dense matrix where the realization allows.
    pub fn apply(&self, g: usize, x: &CVector) -> Result<CVector> {
        if x.len() != self.dim {
            return Err(Error::shape(format!("vector of length {}", self.dim), x.len()));
        }
        if g >= self.group.order() {
            return Err(Error::InvalidArgument(format!(
                "element {g} out of range for {}",
                self.group.label()
            )));
        }
        Ok(self.action(g).apply(x))
    }

    /// The scalar `lambda(g, h)` with `pi(g) pi(h) = lambda pi(gh)`, read off at
    /// the first non-negligible entry of `pi(gh)` in row-major order.
    pub fn cocycle(&self, g: usize, h: usize) -> C64 {
        let lhs = self.action(g).to_dense() * self.action(h).to_dense();
        let rhs = self.matrix_of(self.group.mul(g, h));
        for r in 0..self.dim {
            for c in 0..self.dim {
                if rhs[(r, c)].norm() > COCYCLE_PIVOT_TOL {
                    return lhs[(r, c)] / rhs[(r, c)];
                }
            }
        }
        C64::new(f64::NAN, f64::NAN)
    }

    /// Exhaustive residuals of the representation laws over all elements and pairs.
    pub fn residuals(&self) -> Residuals {
        let order = self.group.order();
        let mats: Vec<CMatrix> = (0..order).map(|g| self.matrix_of(g)).collect();
        let identity = CMatrix::identity(self.dim, self.dim);

        let unitarity = mats.iter().map(linalg::unitarity_residual).fold(0.0, f64::max);

        let mut homomorphism: f64 = 0.0;
        let mut cocycle_modulus: f64 = 0.0;
        let mut cocycle_trivial: f64 = 0.0;
        for g in 0..order {
            for h in 0..order {
                let lambda = self.cocycle(g, h);
                let product = &mats[g] * &mats[h];
                let scaled = &mats[self.group.mul(g, h)] * lambda;
                homomorphism = homomorphism.max(linalg::max_abs_diff(&product, &scaled));
                cocycle_modulus = cocycle_modulus.max((lambda.norm() - 1.0).abs());
                cocycle_trivial = cocycle_trivial.max((lambda - C64::new(1.0, 0.0)).norm());
            }
        }

        let e = &mats[self.group.identity()];
        let lambda0 = e[(0, 0)];
        let identity_scalar = linalg::max_abs_diff(e, &(&identity * lambda0)).max((lambda0.norm() - 1.0).abs());
        let identity_exact = linalg::max_abs_diff(e, &identity);

        Residuals {
            unitarity,
            homomorphism,
            cocycle_modulus,
            cocycle_trivial,
            identity_scalar,
            identity_exact,
        }
    }
}

/// Worst-case deviations from the representation laws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residuals {
    /// `max_g |pi(g)* pi(g) - I|_max`
    pub unitarity: f64,
    /// `max_{g,h} |pi(g) pi(h) - lambda(g,h) pi(gh)|_max`
    pub homomorphism: f64,
    /// `max_{g,h} ||lambda(g,h)| - 1|`
    pub cocycle_modulus: f64,
    /// `max_{g,h} |lambda(g,h) - 1|`
    pub cocycle_trivial: f64,
    /// distance of `pi(e)` from a unimodular multiple of the identity
    pub identity_scalar: f64,
    /// `|pi(e) - I|_max`
    pub identity_exact: f64,
}

impl Residuals {
    /// Whether the residuals satisfy the laws for `kind` at tolerance `tol`.
    pub fn within(&self, kind: RepKind, tol: f64) -> bool {
        let common = self.unitarity <= tol
            && self.homomorphism <= tol
            && self.cocycle_modulus <= tol
            && self.identity_scalar <= tol;
        match kind {
            RepKind::Ordinary => common && self.cocycle_trivial <= tol && self.identity_exact == 0.0,
            RepKind::Projective => common,
        }
    }
}

fn root_of_unity(k: usize, n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64)
}

fn check_dim(what: &'static str, size: usize) -> Result<()> {
    if size > MAX_DIM {
        return Err(Error::SizeLimit {
            what,
            size,
            limit: MAX_DIM,
        });
    }
    Ok(())
}

/// Left regular representation `(L(g) f)(h) = f(g^{-1} h)` on C^G.
pub fn left_regular(group: &FiniteGroup) -> Result<Representation> {
    check_dim("left regular dimension", group.order())?;
    Ok(Representation {
        group: group.clone(),
        dim: group.order(),
        kind: RepKind::Ordinary,
        label: format!("left_regular({})", group.label()),
        realization: Realization::LeftRegular,
    })
}

/// `(rho(k,l) f)(j) = f(l^{-1}(j - k))` on C^p for the affine group over `p`.
pub fn affine_quasi_regular(p: u64) -> Result<Representation> {
    check_dim("affine representation dimension", p as usize)?;
    let group = group::make_affine(p)?;
    Ok(Representation {
        group,
        dim: p as usize,
        kind: RepKind::Ordinary,
        label: format!("affine_quasi_regular({p})"),
        realization: Realization::AffineQuasiRegular { p },
    })
}

/// `pi(g) = I_n` for every `g`.
pub fn trivial(group: &FiniteGroup, n: usize) -> Result<Representation> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(Representation {
        group: group.clone(),
        dim: n,
        kind: RepKind::Ordinary,
        label: format!("trivial({}, {n})", group.label()),
        realization: Realization::Trivial,
    })
}

/// `g -> U pi(g) U*` for a unitary `U`.
pub fn conjugate(rep: &Representation, u: &CMatrix) -> Result<Representation> {
    if u.shape() != (rep.dim, rep.dim) {
        return Err(Error::shape(
            format!("{0}x{0}", rep.dim),
            format!("{}x{}", u.nrows(), u.ncols()),
        ));
    }
    let residual = linalg::unitarity_residual(u);
    if residual > CONJUGATOR_UNITARY_TOL {
        return Err(Error::NonUnitaryConjugator(residual));
    }
    let u_adj = u.adjoint();
    let identity = rep.group.identity();
    let actions = (0..rep.group.order())
        .map(|g| {
            if g == identity && rep.kind == RepKind::Ordinary {
                Action::Dense(CMatrix::identity(rep.dim, rep.dim))
            } else {
                Action::Dense(u * rep.matrix_of(g) * &u_adj)
            }
        })
        .collect();
    Ok(Representation {
        group: rep.group.clone(),
        dim: rep.dim,
        kind: rep.kind,
        label: format!("conjugate({})", rep.label),
        realization: Realization::Explicit(Arc::new(actions)),
    })
}

/// The left regular representation of Z_n conjugated by the unitary DFT.
///
/// Every matrix is diagonal; the result keeps only the diagonals.
pub fn fourier_realization(n: usize) -> Result<Representation> {
    let cyclic = group::make_cyclic(n)?;
    let conj = conjugate(&left_regular(&cyclic)?, &linalg::dft_matrix(n))?;
    let Realization::Explicit(dense) = &conj.realization else {
        unreachable!("conjugate yields explicit matrices")
    };
    let actions = dense
        .iter()
        .enumerate()
        .map(|(g, a)| {
            let Action::Dense(m) = a else { unreachable!() };
            // identity stays exact
            if g == cyclic.identity() {
                Action::Diagonal(vec![C64::new(1.0, 0.0); n])
            } else {
                Action::Diagonal(m.diagonal().iter().copied().collect())
            }
        })
        .collect();
    Ok(Representation {
        label: format!("fourier_realization({n})"),
        realization: Realization::Explicit(Arc::new(actions)),
        ..conj
    })
}

/// Projective time-frequency representation of Z_n x Z_n on C^n,
/// `pi(k, l) = M_l T_k` with `(T_k x)(j) = x(j-k)` and
/// `(M_l x)(j) = exp(2 pi i l j / n) x(j)`.
pub fn weyl_heisenberg(n: usize) -> Result<Representation> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Weyl-Heisenberg dimension must be at least 2, got {n}"
        )));
    }
    let z = group::make_cyclic(n)?;
    let group = group::make_direct_product(&z, &z)?;
    debug_assert!(matches!(group.kind(), GroupKind::Product(..)));
    Ok(Representation {
        group,
        dim: n,
        kind: RepKind::Projective,
        label: format!("weyl_heisenberg({n})"),
        realization: Realization::WeylHeisenberg { n },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, make_direct_product};

    fn basis(n: usize, i: usize) -> CVector {
        let mut e = CVector::zeros(n);
        e[i] = C64::new(1.0, 0.0);
        e
    }

    #[test]
    fn left_regular_shift_and_identity() {
        let z4 = make_cyclic(4).unwrap();
        let l = left_regular(&z4).unwrap();
        // (L(1) e_0)(h) = e_0(h - 1)
        let oracle = CVector::from_fn(4, |h, _| {
            if (h + 4 - 1) % 4 == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert_eq!(l.apply(1, &basis(4, 0)).unwrap(), oracle);
        assert_eq!(oracle, basis(4, 1));
        assert_eq!(l.matrix_of(0), CMatrix::identity(4, 4));

        let z8 = make_cyclic(8).unwrap();
        let l8 = left_regular(&z8).unwrap();
        assert_eq!(l8.matrix_of(3) * l8.matrix_of(5), CMatrix::identity(8, 8));
    }

    #[test]
    fn left_regular_entry_layout() {
        let g = make_direct_product(&make_cyclic(2).unwrap(), &make_cyclic(3).unwrap()).unwrap();
        let l = left_regular(&g).unwrap();
        for x in 0..g.order() {
            let m = l.matrix_of(x);
            let xi = g.inv(x);
            for h in 0..g.order() {
                for c in 0..g.order() {
                    let want = if c == g.mul(xi, h) { 1.0 } else { 0.0 };
                    assert_eq!(m[(h, c)], C64::new(want, 0.0));
                }
            }
        }
    }

    #[test]
    fn affine_representation_examples() {
        let rho = affine_quasi_regular(3).unwrap();
        let g = rho.group().clone();
        let x = g.affine_element(1, 2).unwrap();
        assert_eq!(rho.apply(x, &basis(3, 0)).unwrap(), basis(3, 1));
        assert_eq!(rho.matrix_of(g.identity()), CMatrix::identity(3, 3));

        let rho5 = affine_quasi_regular(5).unwrap();
        let g5 = rho5.group().clone();
        let a = g5.affine_element(1, 2).unwrap();
        let b = g5.affine_element(2, 2).unwrap();
        assert_eq!(rho5.matrix_of(a) * rho5.matrix_of(b), rho5.matrix_of(g5.mul(a, b)));
        assert!(matches!(affine_quasi_regular(6), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn trivial_acts_as_identity() {
        let g = make_cyclic(5).unwrap();
        let t = trivial(&g, 3).unwrap();
        let x = CVector::from_fn(3, |i, _| C64::new(i as f64, -1.0));
        for e in 0..5 {
            assert_eq!(t.matrix_of(e), CMatrix::identity(3, 3));
            assert_eq!(t.apply(e, &x).unwrap(), x);
            assert_eq!(t.cocycle(e, (e + 2) % 5), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn conjugate_by_identity_and_non_unitary() {
        let g = make_cyclic(4).unwrap();
        let l = left_regular(&g).unwrap();
        let same = conjugate(&l, &CMatrix::identity(4, 4)).unwrap();
        for e in 0..4 {
            assert_eq!(same.matrix_of(e), l.matrix_of(e));
        }
        let bad = CMatrix::identity(4, 4) * C64::new(1.1, 0.0);
        assert!(matches!(conjugate(&l, &bad), Err(Error::NonUnitaryConjugator(_))));
        assert!(matches!(
            conjugate(&l, &CMatrix::identity(3, 3)),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn fourier_realization_is_diagonal() {
        let f2 = fourier_realization(2).unwrap();
        let m = f2.matrix_of(1);
        assert!((m[(0, 0)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((m[(1, 1)] - C64::new(-1.0, 0.0)).norm() < 1e-15);
        assert_eq!(m[(0, 1)], C64::new(0.0, 0.0));

        let l = left_regular(&make_cyclic(4).unwrap()).unwrap();
        let f = linalg::dft_matrix(4);
        let dense = conjugate(&l, &f).unwrap();
        for g in 0..4 {
            let d = dense.matrix_of(g);
            let off = (0..4)
                .flat_map(|i| (0..4).map(move |j| (i, j)))
                .filter(|(i, j)| i != j)
                .map(|(i, j)| d[(i, j)].norm())
                .fold(0.0, f64::max);
            assert!(off <= 1e-12, "off-diagonal {off:e}");
        }
        assert_eq!(fourier_realization(4).unwrap().matrix_of(0), CMatrix::identity(4, 4));
    }

    #[test]
    fn weyl_heisenberg_commutation_phase() {
        let n = 4;
        let wh = weyl_heisenberg(n).unwrap();
        let g = wh.group().clone();
        assert_eq!(wh.matrix_of(g.identity()), CMatrix::identity(n, n));
        let t = g.product_element(1, 0).unwrap();
        let m = g.product_element(0, 1).unwrap();
        let tm = wh.matrix_of(t) * wh.matrix_of(m);
        let mt = wh.matrix_of(m) * wh.matrix_of(t);
        // T_1 M_1 = exp(-2 pi i / n) M_1 T_1
        let phase = C64::from_polar(1.0, -2.0 * PI / n as f64);
        assert!(linalg::max_abs_diff(&tm, &(&mt * phase)) < 1e-14);
        assert!(weyl_heisenberg(1).is_err());
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let l = left_regular(&make_cyclic(4).unwrap()).unwrap();
        assert!(matches!(l.apply(0, &CVector::zeros(3)), Err(Error::Shape { .. })));
    }

    #[test]
    fn from_matrices_checks_shapes() {
        let g = make_cyclic(2).unwrap();
        let ok = Representation::from_matrices(
            &g,
            vec![CMatrix::identity(2, 2), CMatrix::identity(2, 2)],
            RepKind::Ordinary,
            "debug",
        )
        .unwrap();
        assert!(ok.residuals().within(RepKind::Ordinary, 1e-12));
        assert!(Representation::from_matrices(&g, vec![CMatrix::identity(2, 2)], RepKind::Ordinary, "x").is_err());
        assert!(Representation::from_matrices(
            &g,
            vec![CMatrix::identity(2, 2), CMatrix::identity(3, 3)],
            RepKind::Ordinary,
            "x"
        )
        .is_err());
    }
}
