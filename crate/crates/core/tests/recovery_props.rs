mod common;

use orbit_rip::analysis::{coherence, restricted_isometry_constant};
use orbit_rip::experiment::runner::random_sparse_signal;
use orbit_rip::experiment::{run_phase_transition, ExperimentConfig};
use orbit_rip::group::{make_cyclic, random_sampling_set};
use orbit_rip::linalg::{self, CMatrix, C64};
use orbit_rip::recovery::{hard_threshold, iht, omp, recovery_success, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use orbit_rip::representation;
use orbit_rip::sensing::{measurement_matrix_from_spec, Distribution, GeneratorSpec};
use proptest::prelude::*;
use rand::Rng;

/// Rejection-samples a tall complex Gaussian matrix whose brute-force
/// `delta_k` is at most `limit`.
fn certified_gaussian(m: usize, n: usize, k: usize, limit: f64, r: &mut impl Rng) -> CMatrix {
    for _ in 0..50 {
        let phi = common::gaussian_matrix(m, n, r);
        if restricted_isometry_constant(&phi, k).unwrap().delta <= limit {
            return phi;
        }
    }
    panic!("no {m}x{n} instance with delta_{k} <= {limit}");
}

#[test]
fn iht_exact_on_certified_instances() {
    // delta_{3s} <= 0.3 with s = 2, n = 16
    let mut r = common::rng(21);
    let phi = certified_gaussian(400, 16, 6, 0.3, &mut r);
    for t in 0..100u64 {
        let x = random_sparse_signal(16, 2, 1000 + t);
        let y = &phi * &x;
        let res = iht(&phi, &y, 2, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap().with_truth(&x);
        assert!(
            res.relative_error.unwrap() <= 1e-6,
            "trial {t}: {:?}",
            res.relative_error
        );
    }
}

#[test]
fn iht_exact_on_certified_partial_dft() {
    // 24 x 32 partial DFT, rescaled to unit columns, certified delta_2 <= 0.3; s = 1
    let dft = linalg::dft_matrix(32);
    let mut r = common::rng(22);
    let scale = C64::from((32.0f64 / 24.0).sqrt());
    let phi = (0..200)
        .map(|_| {
            let rows = rand::seq::index::sample(&mut r, 32, 24);
            CMatrix::from_fn(24, 32, |i, j| dft[(rows.index(i), j)] * scale)
        })
        .find(|phi| restricted_isometry_constant(phi, 2).unwrap().delta <= 0.3)
        .expect("certified partial DFT");
    for t in 0..100u64 {
        let x = random_sparse_signal(32, 1, 2000 + t);
        let res = iht(&phi, &(&phi * &x), 1, DEFAULT_MAX_ITERS, DEFAULT_TOL)
            .unwrap()
            .with_truth(&x);
        assert!(res.relative_error.unwrap() <= 1e-6);
    }
}

#[test]
fn omp_exact_below_coherence_limit() {
    // [I | F]: coherence 1/sqrt(n) = 1/4 < 1/(2s - 1) for s = 2
    let n = 16;
    let f = linalg::dft_matrix(n);
    let phi = CMatrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            C64::from(f64::from(u8::from(i == j)))
        } else {
            f[(i, j - n)]
        }
    });
    let mu = coherence(&phi).unwrap();
    assert!((mu - 0.25).abs() <= 1e-12);
    for t in 0..200u64 {
        let x = random_sparse_signal(2 * n, 2, 3000 + t);
        let res = omp(&phi, &(&phi * &x), 2).unwrap().with_truth(&x);
        assert!(res.relative_error.unwrap() <= 1e-10, "trial {t}");
        assert!(!res.rank_deficient);
    }
}

#[test]
fn omp_and_iht_mostly_agree() {
    let g = make_cyclic(32).unwrap();
    let rep = representation::left_regular(&g).unwrap();
    let trials = 100u64;
    let mut agree = 0;
    for t in 0..trials {
        let omega = random_sampling_set(&g, 24, None, t).unwrap();
        let spec = GeneratorSpec {
            distribution: Distribution::Steinhaus,
            dim: 32,
            seed: t,
        };
        let phi = measurement_matrix_from_spec(&rep, &omega, &spec)
            .unwrap()
            .into_entries();
        let x = random_sparse_signal(32, 2, t);
        let y = &phi * &x;
        let a = recovery_success(&x, &iht(&phi, &y, 2, DEFAULT_MAX_ITERS, DEFAULT_TOL).unwrap(), 1e-4).unwrap();
        let b = recovery_success(&x, &omp(&phi, &y, 2).unwrap(), 1e-4).unwrap();
        if a == b {
            agree += 1;
        } else {
            eprintln!("trial {t}: iht success {a}, omp success {b}");
        }
    }
    assert!(agree as f64 >= 0.9 * trials as f64, "agreement {agree}/{trials}");
}

#[test]
fn trivial_representation_succeeds_about_one_in_n() {
    // identical rows: the support is found only when it holds the largest |xi_j|
    let text = r#"
representation = "trivial"
n = 8
distribution = "gaussian"
sparsity_list = [1]
m_list = [4]
trials_per_cell = 1000
master_seed = 5

[group]
kind = "cyclic"
n = 16
"#;
    let config = ExperimentConfig::parse(text).unwrap();
    let row = run_phase_transition(&config).unwrap().rows[0].clone();
    let p: f64 = 1.0 / 8.0;
    let sigma = (p * (1.0 - p) / 1000.0).sqrt();
    assert!((row.success_rate - p).abs() <= 3.0 * sigma, "rate {}", row.success_rate);
}

#[test]
fn iht_handles_noiseless_zero_and_shapes() {
    let phi = common::gaussian_matrix(4, 6, &mut common::rng(1));
    assert!(iht(&phi, &orbit_rip::CVector::zeros(3), 1, 10, 1e-8).is_err());
    assert!(iht(&phi, &orbit_rip::CVector::zeros(4), 7, 10, 1e-8).is_err());
    assert!(omp(&phi, &orbit_rip::CVector::zeros(4), 5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hard_threshold_keeps_largest(n in 1usize..20, s in 1usize..20, seed in any::<u64>()) {
        let x = common::random_vector(n, &mut common::rng(seed));
        let h = hard_threshold(&x, s);
        let kept = h.iter().filter(|z| z.norm() > 0.0).count();
        prop_assert_eq!(kept, s.min(n));
        let min_kept = h.iter().filter(|z| z.norm() > 0.0).map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        for (a, b) in x.iter().zip(h.iter()) {
            prop_assert!(*b == *a || *b == C64::new(0.0, 0.0));
            if *b == C64::new(0.0, 0.0) {
                prop_assert!(a.norm() <= min_kept);
            }
        }
    }
}
