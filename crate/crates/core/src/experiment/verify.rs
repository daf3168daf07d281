//! Self-contained verification suite: orbit constants of the built-in
//! representations against their known values, the circulant
//! specialization, and the representation laws.

use std::fmt;

use crate::analysis::{omega_two, orbit_constant_exact};
use crate::error::Result;
use crate::group::{
    self, affine_axis_subset, make_affine, make_cyclic, make_direct_product, random_sampling_set, FiniteGroup,
};
use crate::linalg;
use crate::representation::{self, RepKind, Representation};
use crate::sensing::{build_measurement_matrix, draw_generator, partial_circulant_direct, Distribution, GeneratorSpec};

/// Tolerance on orbit constants that are exact in theory.
pub const CONSTANT_TOL: f64 = 1e-9;
/// Tolerance on the representation laws.
pub const REPRESENTATION_TOL: f64 = 1e-12;
/// Entrywise tolerance for the circulant specialization.
pub const CIRCULANT_TOL: f64 = 1e-13;

const SUITE_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    /// Human-readable reference value, e.g. `== 1 +- 1e-9`.
    pub bound: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} = {:.16e} bound = {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.bound
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn equals(name: String, measured: f64, expected: f64, tol: f64) -> Check {
    Check {
        passed: (measured - expected).abs() <= tol,
        bound: format!("== {expected} +- {tol:e}"),
        name,
        measured,
    }
}

fn at_most(name: String, measured: f64, limit: f64) -> Check {
    Check {
        passed: measured <= limit,
        bound: format!("<= {limit:e}"),
        name,
        measured,
    }
}

fn sampling_sizes(order: usize) -> Vec<usize> {
    let mut sizes = vec![1, 2, order / 2, order];
    sizes.retain(|&m| m >= 1);
    sizes.dedup();
    sizes
}

fn left_regular_checks(checks: &mut Vec<Check>) -> Result<()> {
    let z2 = make_cyclic(2)?;
    let z3 = make_cyclic(3)?;
    let groups: Vec<FiniteGroup> = vec![
        make_cyclic(8)?,
        make_cyclic(12)?,
        make_direct_product(&z2, &z3)?,
        make_affine(5)?,
    ];
    for g in &groups {
        let rep = representation::left_regular(g)?;
        for m in sampling_sizes(g.order()) {
            let omega = random_sampling_set(g, m, None, SUITE_SEED ^ m as u64)?;
            let c = orbit_constant_exact(&rep, &omega)?;
            checks.push(equals(
                format!("left_regular_constant[{},m={m}]", g.label()),
                c.value,
                1.0,
                CONSTANT_TOL,
            ));
        }
    }
    Ok(())
}

fn affine_checks(checks: &mut Vec<Check>) -> Result<()> {
    for p in [5u64, 7] {
        let rep = representation::affine_quasi_regular(p)?;
        let g = rep.group().clone();
        for (i, m) in [2usize, 4, 8, 12].into_iter().enumerate() {
            let omega = random_sampling_set(&g, m, None, SUITE_SEED + i as u64)?;
            let c = orbit_constant_exact(&rep, &omega)?;
            let limit = omega_two(&g, &omega)?.len() as f64;
            checks.push(at_most(
                format!("affine_constant[Aff({p}),m={m}] (|Omega_2| = {limit})"),
                c.value,
                limit + CONSTANT_TOL,
            ));
        }
        let axis = affine_axis_subset(p)?;
        let omega = random_sampling_set(&g, p as usize, Some(&axis), SUITE_SEED)?;
        let c = orbit_constant_exact(&rep, &omega)?;
        checks.push(equals(
            format!("affine_axis_constant[Aff({p}),m={p}]"),
            c.value,
            1.0,
            CONSTANT_TOL,
        ));
    }
    Ok(())
}

fn trivial_and_fourier_checks(checks: &mut Vec<Check>) -> Result<()> {
    let g = make_cyclic(16)?;
    let triv = representation::trivial(&g, 8)?;
    for m in [1usize, 4, 16] {
        let omega = random_sampling_set(&g, m, None, SUITE_SEED ^ 0x77)?;
        let c = orbit_constant_exact(&triv, &omega)?;
        checks.push(equals(
            format!("trivial_constant[Z16,n=8,m={m}]"),
            c.value,
            m as f64,
            0.0,
        ));
    }
    let fourier = representation::fourier_realization(16)?;
    for m in [2usize, 4, 8] {
        let omega = random_sampling_set(fourier.group(), m, None, SUITE_SEED ^ 0x99)?;
        let c = orbit_constant_exact(&fourier, &omega)?;
        checks.push(equals(
            format!("fourier_constant[n=16,m={m}]"),
            c.value,
            m as f64,
            CONSTANT_TOL,
        ));
    }
    Ok(())
}

fn circulant_checks(checks: &mut Vec<Check>) -> Result<()> {
    for n in [8usize, 16] {
        let g = make_cyclic(n)?;
        let rep = representation::left_regular(&g)?;
        let mut worst: f64 = 0.0;
        for trial in 0..5u64 {
            let seed = SUITE_SEED + 100 * n as u64 + trial;
            let omega = random_sampling_set(&g, 1 + (trial as usize * 3) % n, None, seed)?;
            let xi = draw_generator(&GeneratorSpec {
                distribution: Distribution::Steinhaus,
                dim: n,
                seed,
            })?;
            let phi = build_measurement_matrix(&rep, &omega, &xi)?;
            let direct = partial_circulant_direct(&xi, &omega)?;
            worst = worst.max(linalg::max_abs_diff(phi.entries(), &direct));
        }
        checks.push(at_most(format!("circulant_equivalence[Z{n}]"), worst, CIRCULANT_TOL));
    }
    Ok(())
}

/// Unitarity and (projective) homomorphism checks for one representation.
pub fn representation_checks(rep: &Representation) -> Vec<Check> {
    let r = rep.residuals();
    let label = rep.label();
    let mut out = vec![
        at_most(format!("unitarity[{label}]"), r.unitarity, REPRESENTATION_TOL),
        at_most(format!("homomorphism[{label}]"), r.homomorphism, REPRESENTATION_TOL),
        at_most(
            format!("cocycle_modulus[{label}]"),
            r.cocycle_modulus,
            REPRESENTATION_TOL,
        ),
    ];
    match rep.kind() {
        RepKind::Ordinary => {
            out.push(at_most(
                format!("cocycle_trivial[{label}]"),
                r.cocycle_trivial,
                REPRESENTATION_TOL,
            ));
            out.push(at_most(format!("identity_exact[{label}]"), r.identity_exact, 0.0));
        }
        RepKind::Projective => {
            out.push(at_most(
                format!("identity_scalar[{label}]"),
                r.identity_scalar,
                REPRESENTATION_TOL,
            ));
        }
    }
    out
}

/// Every built-in representation on groups of order at most 24.
pub fn builtin_representations() -> Result<Vec<Representation>> {
    let z2 = make_cyclic(2)?;
    let z3 = make_cyclic(3)?;
    let z4 = make_cyclic(4)?;
    Ok(vec![
        representation::left_regular(&make_cyclic(8)?)?,
        representation::left_regular(&make_cyclic(12)?)?,
        representation::left_regular(&make_direct_product(&z2, &z3)?)?,
        representation::left_regular(&make_direct_product(&z2, &z2)?)?,
        representation::left_regular(&make_affine(3)?)?,
        representation::left_regular(&make_affine(5)?)?,
        representation::left_regular(&group::make_direct_product(&z4, &z3)?)?,
        representation::affine_quasi_regular(3)?,
        representation::affine_quasi_regular(5)?,
        representation::trivial(&make_cyclic(6)?, 3)?,
        representation::trivial(&make_affine(5)?, 4)?,
        representation::fourier_realization(8)?,
        representation::fourier_realization(16)?,
        representation::conjugate(&representation::left_regular(&z4)?, &linalg::dft_matrix(4))?,
        representation::weyl_heisenberg(2)?,
        representation::weyl_heisenberg(3)?,
        representation::weyl_heisenberg(4)?,
    ])
}

/// The suite with default seeds.
pub fn run_verification_suite() -> Result<VerificationReport> {
    run_verification_suite_with(&[])
}

/// The default suite plus the representation-law checks of `extra`.
pub fn run_verification_suite_with(extra: &[Representation]) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    left_regular_checks(&mut checks)?;
    affine_checks(&mut checks)?;
    trivial_and_fourier_checks(&mut checks)?;
    circulant_checks(&mut checks)?;
    for rep in builtin_representations()?.iter().chain(extra) {
        checks.extend(representation_checks(rep));
    }
    Ok(VerificationReport { checks })
}
