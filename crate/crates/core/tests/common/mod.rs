#![allow(dead_code)]

use orbit_rip::linalg::{CMatrix, CVector, C64};
use orbit_rip::rng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rng::stream(seed, 0x7e57)
}

pub fn complex_normal(r: &mut impl Rng) -> C64 {
    let a: f64 = StandardNormal.sample(r);
    let b: f64 = StandardNormal.sample(r);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

/// Entries i.i.d. complex normal with variance 1/m, so columns have unit
/// expected norm.
pub fn gaussian_matrix(m: usize, n: usize, r: &mut impl Rng) -> CMatrix {
    let s = 1.0 / (m as f64).sqrt();
    CMatrix::from_fn(m, n, |_, _| complex_normal(r) * s)
}

pub fn random_vector(n: usize, r: &mut impl Rng) -> CVector {
    CVector::from_fn(n, |_, _| complex_normal(r))
}

pub fn unit_vector(n: usize, r: &mut impl Rng) -> CVector {
    let v = random_vector(n, r);
    let norm = v.norm();
    v / C64::from(norm)
}

pub fn random_unitary(n: usize, r: &mut impl Rng) -> CMatrix {
    let g = gaussian_matrix(n, n, r);
    g.qr().q()
}
