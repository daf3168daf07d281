//! Orbit constants, restricted isometry constants and the measurement budget.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupKind, SamplingSet};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::representation::{Action, Representation};

/// Dimension cap for [`orbit_constant_exact`].
pub const ORBIT_CONSTANT_MAX_DIM: usize = 2048;
/// Default cap on the number of supports enumerated by
/// [`restricted_isometry_constant`].
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 2_000_000;

/// The smallest constant `C` with
/// `|| m^{-1/2} R_Omega (pi(g) y)^* e_j ||_2 <= sqrt(C / m) ||y||_2`
/// for all coordinates `j` and vectors `y`.
#[derive(Clone, Debug)]
pub struct OrbitConstantReport {
    pub value: f64,
    pub argmax_index: usize,
    /// Unit vector attaining the supremum at `argmax_index`.
    pub witness: CVector,
    pub per_index: Vec<f64>,
}

impl OrbitConstantReport {
    /// `key = value` lines.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        writeln!(out, "value = {:.16e}", self.value).unwrap();
        writeln!(out, "argmax_index = {}", self.argmax_index).unwrap();
        writeln!(out, "per_index = {}", join_floats(&self.per_index)).unwrap();
        writeln!(out, "witness = {}", join_complex(self.witness.as_slice())).unwrap();
        out
    }
}

#[derive(Clone, Debug)]
pub struct RipReport {
    pub s: usize,
    pub delta: f64,
    /// Lexicographically first support attaining `delta`.
    pub argmax_support: Vec<usize>,
    pub n_supports_checked: u128,
    /// Unit `s`-sparse vector on `argmax_support` with `| ||Phi x||^2 - 1 | = delta`.
    pub witness: CVector,
}

impl RipReport {
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        writeln!(out, "s = {}", self.s).unwrap();
        writeln!(out, "delta = {:.16e}", self.delta).unwrap();
        let support: Vec<String> = self.argmax_support.iter().map(usize::to_string).collect();
        writeln!(out, "argmax_support = {}", support.join(",")).unwrap();
        writeln!(out, "n_supports_checked = {}", self.n_supports_checked).unwrap();
        out
    }
}

fn join_floats(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
}

fn join_complex(xs: &[C64]) -> String {
    xs.iter()
        .map(|z| format!("{:.16e}:{:.16e}", z.re, z.im))
        .collect::<Vec<_>>()
        .join(",")
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> Result<f64> {
    linalg::top_singular(m).map(|(s, _)| s)
}

/// Matrix whose `l`-th row is row `j` of `pi(omega_l)`.
fn coordinate_matrix(actions: &[Action], n: usize, j: usize) -> CMatrix {
    let rows: Vec<Vec<C64>> = actions.iter().map(|a| a.row(j)).collect();
    CMatrix::from_fn(rows.len(), n, |l, c| rows[l][c])
}

/// When every row of `K_j` has a single nonzero, `K_j^* K_j` is diagonal
/// with entries the summed squared moduli per column; its largest entry is
/// `sigma_max(K_j)^2` and the matching basis vector is a witness.
fn monomial_coordinate_constant(actions: &[Action], n: usize, j: usize) -> Option<(f64, CVector)> {
    let mut weights = vec![0.0; n];
    for a in actions {
        let (col, v) = a.sparse_row(j)?;
        weights[col] += v.norm_sqr();
    }
    let mut best = 0;
    for (c, &w) in weights.iter().enumerate() {
        if w > weights[best] {
            best = c;
        }
    }
    let mut witness = CVector::zeros(n);
    witness[best] = C64::new(1.0, 0.0);
    Some((weights[best], witness))
}

/// Exact orbit constant: `max_j sigma_max(K_j)^2`, `K_j` stacking row `j`
/// of each `pi(omega_l)`.
pub fn orbit_constant_exact(rep: &Representation, omega: &SamplingSet) -> Result<OrbitConstantReport> {
    if rep.dim() > ORBIT_CONSTANT_MAX_DIM {
        return Err(Error::SizeLimit {
            what: "orbit constant dimension",
            size: rep.dim(),
            limit: ORBIT_CONSTANT_MAX_DIM,
        });
    }
    if omega.group_label() != rep.group().label() {
        return Err(Error::InvalidArgument(format!(
            "sampling set over {} used with a representation of {}",
            omega.group_label(),
            rep.group().label()
        )));
    }
    let n = rep.dim();
    let actions: Vec<Action> = omega.elements().iter().map(|&w| rep.action(w)).collect();
    let per: Vec<(f64, CVector)> = (0..n)
        .into_par_iter()
        .map(|j| match monomial_coordinate_constant(&actions, n, j) {
            Some(found) => Ok(found),
            None => linalg::top_singular(&coordinate_matrix(&actions, n, j)).map(|(s, v)| (s * s, v)),
        })
        .collect::<Result<_>>()?;

    let mut argmax = 0;
    for (j, (v, _)) in per.iter().enumerate() {
        if *v > per[argmax].0 {
            argmax = j;
        }
    }
    let per_index: Vec<f64> = per.iter().map(|(v, _)| *v).collect();
    let (value, witness) = per.into_iter().nth(argmax).expect("dim >= 1");
    Ok(OrbitConstantReport {
        value,
        argmax_index: argmax,
        witness,
        per_index,
    })
}

/// Left-hand side of the orbit bound evaluated directly:
/// `|| m^{-1/2} (conj((pi(omega_l) y)_j))_l ||_2`.
pub fn orbit_bound_lhs(rep: &Representation, omega: &SamplingSet, j: usize, y: &CVector) -> Result<f64> {
    let m = omega.len() as f64;
    let mut sum = 0.0;
    for &w in omega.elements() {
        sum += rep.apply(w, y)?[j].conj().norm_sqr() / m;
    }
    Ok(sum.sqrt())
}

/// Distinct second coordinates `l` of the affine elements `(k, l)` in `omega`, ascending.
pub fn omega_two(group: &FiniteGroup, omega: &SamplingSet) -> Result<Vec<u64>> {
    if !matches!(group.kind(), GroupKind::Affine { .. }) {
        return Err(Error::InvalidArgument(format!(
            "{} is not an affine group",
            group.label()
        )));
    }
    if omega.group_label() != group.label() {
        return Err(Error::InvalidArgument(format!(
            "sampling set over {} does not belong to {}",
            omega.group_label(),
            group.label()
        )));
    }
    let mut ls = omega
        .elements()
        .iter()
        .map(|&e| group.affine_pair(e).map(|(_, l)| l))
        .collect::<Result<Vec<_>>>()?;
    ls.sort_unstable();
    ls.dedup();
    Ok(ls)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `delta_s` by enumerating every support of size `s`, with the default budget.
pub fn restricted_isometry_constant(phi: &CMatrix, s: usize) -> Result<RipReport> {
    restricted_isometry_constant_with_budget(phi, s, DEFAULT_ENUMERATION_BUDGET)
}

/// `delta_s = max_{|S| = s} || Phi_S^* Phi_S - I ||_{2->2}` by exhaustive
/// lexicographic enumeration; ties keep the first support found.
pub fn restricted_isometry_constant_with_budget(phi: &CMatrix, s: usize, budget: u128) -> Result<RipReport> {
    let n = phi.ncols();
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!("sparsity {s} outside 1..={n}")));
    }
    let count = binomial(n, s);
    if count > budget {
        return Err(Error::EnumerationBudget { n, s, count, budget });
    }
    let gram = phi.adjoint() * phi;

    // Supports grouped by their first index; each group is enumerated in
    // lexicographic order, so the ordered reduction below is lexicographic.
    let best = (0..=n - s)
        .into_par_iter()
        .map(|first| {
            let mut support: Vec<usize> = (first..first + s).collect();
            let mut best = (gram_deviation(&gram, &support), support.clone());
            while next_combination(&mut support[1..], n) {
                let d = gram_deviation(&gram, &support);
                if d > best.0 {
                    best = (d, support.clone());
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .expect("at least one support");

    let (delta, support) = best;
    let witness = extremal_vector(&gram, &support, n);
    Ok(RipReport {
        s,
        delta,
        argmax_support: support,
        n_supports_checked: count,
        witness,
    })
}

/// Advances a strictly increasing tail in place; `false` when exhausted.
fn next_combination(tail: &mut [usize], n: usize) -> bool {
    let k = tail.len();
    for i in (0..k).rev() {
        if tail[i] < n - (k - i) {
            tail[i] += 1;
            for j in i + 1..k {
                tail[j] = tail[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn sub_gram(gram: &CMatrix, support: &[usize]) -> CMatrix {
    let s = support.len();
    CMatrix::from_fn(s, s, |a, b| gram[(support[a], support[b])])
}

/// `|| G_S - I ||_{2->2}` for Hermitian `G_S`.
fn gram_deviation(gram: &CMatrix, support: &[usize]) -> f64 {
    match support {
        [i] => (gram[(*i, *i)].re - 1.0).abs(),
        [i, j] => {
            let a = gram[(*i, *i)].re;
            let d = gram[(*j, *j)].re;
            let b = gram[(*i, *j)];
            let mid = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            (mid + radius - 1.0).abs().max((mid - radius - 1.0).abs())
        }
        _ => {
            let (vals, _) = linalg::hermitian_eigen(&sub_gram(gram, support));
            vals.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max)
        }
    }
}

fn extremal_vector(gram: &CMatrix, support: &[usize], n: usize) -> CVector {
    let (vals, vecs) = linalg::hermitian_eigen(&sub_gram(gram, support));
    let k = (0..vals.len())
        .max_by(|&a, &b| (vals[a] - 1.0).abs().total_cmp(&(vals[b] - 1.0).abs()))
        .expect("non-empty support");
    let mut x = CVector::zeros(n);
    for (a, &i) in support.iter().enumerate() {
        x[i] = vecs[(a, k)];
    }
    x
}

/// `max_{i != j} |<phi_i, phi_j>| / (||phi_i|| ||phi_j||)`.
pub fn coherence(phi: &CMatrix) -> Result<f64> {
    let norms: Vec<f64> = phi.column_iter().map(|c| c.norm()).collect();
    if let Some(j) = norms.iter().position(|&v| v == 0.0) {
        return Err(Error::DegenerateColumn(j));
    }
    let gram = phi.adjoint() * phi;
    let n = phi.ncols();
    let mut mu: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            mu = mu.max(gram[(i, j)].norm() / (norms[i] * norms[j]));
        }
    }
    Ok(mu)
}

/// Ceiling of `c delta^-2 s C max{(ln(s C) ln n)^2, ln(1/eta)}`, natural logs.
pub fn min_measurements(s: usize, n: usize, delta: f64, eta: f64, orbit_constant: f64, c: f64) -> Result<u64> {
    let bad = |msg: String| Err(Error::InvalidArgument(msg));
    if s == 0 || s > n {
        return bad(format!("sparsity {s} outside 1..={n}"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return bad(format!("delta {delta} outside (0, 1)"));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return bad(format!("eta {eta} outside (0, 1)"));
    }
    if !(orbit_constant >= 1.0 && orbit_constant.is_finite()) {
        return bad(format!("orbit constant {orbit_constant} must be finite and at least 1"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return bad(format!("constant c = {c} must be positive"));
    }
    let sc = s as f64 * orbit_constant;
    let chaining = (sc.ln() * (n as f64).ln()).powi(2);
    let confidence = (1.0 / eta).ln();
    Ok((c * sc * chaining.max(confidence) / (delta * delta)).ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_cyclic, SamplingSet};
    use crate::representation::trivial;

    #[test]
    fn combinations_in_lexicographic_order() {
        let mut all = Vec::new();
        for first in 0..=2 {
            let mut c: Vec<usize> = (first..first + 3).collect();
            all.push(c.clone());
            while next_combination(&mut c[1..], 5) {
                all.push(c.clone());
            }
        }
        assert_eq!(all.len(), 10);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(32, 2), 496);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn identity_and_scaled_identity() {
        let i = CMatrix::identity(6, 6);
        for s in 1..=4 {
            let r = restricted_isometry_constant(&i, s).unwrap();
            assert_eq!(r.delta, 0.0);
            assert_eq!(r.argmax_support, (0..s).collect::<Vec<_>>());
        }
        let two = &i * C64::new(2.0, 0.0);
        assert_eq!(restricted_isometry_constant(&two, 1).unwrap().delta, 3.0);
    }

    #[test]
    fn rip_rejects_bad_sparsity_and_budget() {
        let i = CMatrix::identity(40, 40);
        assert!(restricted_isometry_constant(&i, 0).is_err());
        assert!(restricted_isometry_constant(&i, 41).is_err());
        assert!(matches!(
            restricted_isometry_constant(&i, 20),
            Err(Error::EnumerationBudget { .. })
        ));
    }

    #[test]
    fn closed_form_matches_eigensolver() {
        let phi = CMatrix::from_fn(3, 5, |i, j| {
            C64::new((i * 5 + j) as f64 * 0.1 - 0.4, (j as f64 - i as f64) * 0.2)
        });
        let gram = phi.adjoint() * &phi;
        for i in 0..5 {
            for j in i + 1..5 {
                let (vals, _) = linalg::hermitian_eigen(&sub_gram(&gram, &[i, j]));
                let eig = vals.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
                assert!((gram_deviation(&gram, &[i, j]) - eig).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn coherence_cases() {
        assert_eq!(coherence(&CMatrix::identity(4, 4)).unwrap(), 0.0);
        let dup = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(2.0, 0.0),
            ],
        );
        assert!((coherence(&dup).unwrap() - 1.0).abs() < 1e-15);
        let zero_col = CMatrix::from_row_slice(1, 2, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(coherence(&zero_col), Err(Error::DegenerateColumn(1))));
    }

    #[test]
    fn budget_formula() {
        // s = 1, C = 1: ln(1) = 0 collapses the first branch.
        let b = min_measurements(1, 100, 0.5, 0.01, 1.0, 2.0).unwrap();
        assert_eq!(b, (2.0 * 4.0 * 100f64.ln()).ceil() as u64);
        assert_eq!(min_measurements(4, 64, 0.5, 0.01, 1.0, 1.0).unwrap(), 532);
        let lo = min_measurements(4, 64, 0.5, 0.01, 2.0, 1.0).unwrap();
        let hi = min_measurements(4, 64, 0.5, 0.01, 4.0, 1.0).unwrap();
        assert!(hi > 2 * lo);
        for (s, n, d, e, cc, c) in [
            (0, 4, 0.5, 0.1, 1.0, 1.0),
            (5, 4, 0.5, 0.1, 1.0, 1.0),
            (1, 4, 1.0, 0.1, 1.0, 1.0),
            (1, 4, 0.5, 0.0, 1.0, 1.0),
            (1, 4, 0.5, 0.1, 0.5, 1.0),
            (1, 4, 0.5, 0.1, 1.0, 0.0),
        ] {
            assert!(min_measurements(s, n, d, e, cc, c).is_err());
        }
    }

    #[test]
    fn trivial_constant_and_omega_two_errors() {
        let g = make_cyclic(8).unwrap();
        let rep = trivial(&g, 5).unwrap();
        let omega = SamplingSet::new(&g, vec![0, 3, 5]).unwrap();
        let r = orbit_constant_exact(&rep, &omega).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
        assert!(omega_two(&g, &omega).is_err());
        let rec = r.to_record();
        assert!(rec.starts_with("value = 3"));
        assert!(rec.contains("argmax_index = 0"));
    }
}
