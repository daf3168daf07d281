mod common;

use orbit_rip::group::{
    affine_axis_subset, make_affine, make_cyclic, make_direct_product, random_sampling_set, GroupKind, SamplingSet,
};
use orbit_rip::Error;
use proptest::prelude::*;

#[test]
fn axioms_hold_exhaustively_on_small_groups() {
    let z2 = make_cyclic(2).unwrap();
    let z3 = make_cyclic(3).unwrap();
    let groups = vec![
        make_cyclic(1).unwrap(),
        make_cyclic(8).unwrap(),
        make_cyclic(12).unwrap(),
        make_affine(3).unwrap(),
        make_affine(5).unwrap(),
        make_affine(7).unwrap(),
        make_direct_product(&z2, &z3).unwrap(),
        make_direct_product(&z2, &z2).unwrap(),
        make_direct_product(&make_affine(3).unwrap(), &z2).unwrap(),
    ];
    for g in &groups {
        g.verify_axioms().unwrap();
        // brute force, independent of verify_axioms
        let n = g.order();
        let e = g.identity();
        for a in 0..n {
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(e, a), a);
            assert_eq!(g.mul(a, g.inv(a)), e);
            for b in 0..n {
                for c in 0..n {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{}", g.label());
                }
            }
        }
    }
}

#[test]
fn affine_law_matches_formula() {
    for p in [3u64, 5, 7, 11] {
        let g = make_affine(p).unwrap();
        assert_eq!(g.order() as u64, p * (p - 1));
        for a in 0..g.order() {
            let (k, l) = g.affine_pair(a).unwrap();
            assert_eq!(a as u64, k * (p - 1) + (l - 1));
            let (ik, il) = g.affine_pair(g.inv(a)).unwrap();
            assert_eq!((k + l * ik) % p, 0);
            assert_eq!((l * il) % p, 1);
            for b in 0..g.order() {
                let (k2, l2) = g.affine_pair(b).unwrap();
                let expected = g.affine_element((k + l * k2) % p, (l * l2) % p).unwrap();
                assert_eq!(g.mul(a, b), expected);
            }
        }
        assert!(!g.is_abelian(), "Aff({p}) is non-abelian");
    }
}

#[test]
fn affine_examples() {
    let g = make_affine(5).unwrap();
    let a = g.affine_element(1, 2).unwrap();
    let b = g.affine_element(3, 4).unwrap();
    assert_eq!(g.affine_pair(g.mul(a, b)).unwrap(), (2, 3));
    assert_eq!(g.affine_pair(g.inv(a)).unwrap(), (2, 3));
    assert!(matches!(make_affine(6), Err(Error::InvalidArgument(_))));
    assert!(make_cyclic(0).is_err());
}

#[test]
fn klein_four_has_exponent_two() {
    let z2 = make_cyclic(2).unwrap();
    let v = make_direct_product(&z2, &z2).unwrap();
    assert!(v.is_abelian());
    assert!(matches!(v.kind(), GroupKind::Product(_, _)));
    for a in 1..4 {
        assert_eq!(v.element_order(a), 2);
    }
    assert_eq!(v.element_order(v.identity()), 1);
}

#[test]
fn sampling_sets_are_distinct_and_seeded() {
    let g = make_affine(7).unwrap();
    for seed in 0..1000u64 {
        let m = 1 + (seed as usize % g.order());
        let omega = random_sampling_set(&g, m, None, seed).unwrap();
        let mut e = omega.elements().to_vec();
        e.sort_unstable();
        e.dedup();
        assert_eq!(e.len(), m);
        assert!(e.iter().all(|&x| x < g.order()));
        assert_eq!(omega, random_sampling_set(&g, m, None, seed).unwrap());
    }
    let axis = affine_axis_subset(7).unwrap();
    let omega = random_sampling_set(&g, 7, Some(&axis), 3).unwrap();
    assert!(omega.elements().iter().all(|x| axis.contains(x)));
    for &a in &axis {
        assert_eq!(g.affine_pair(a).unwrap().1, 1);
    }
    assert!(matches!(
        random_sampling_set(&g, 8, Some(&axis), 0),
        Err(Error::InfeasibleSample {
            requested: 8,
            available: 7
        })
    ));
    assert!(SamplingSet::new(&g, vec![1, 1]).is_err());
    assert!(SamplingSet::new(&g, vec![42]).is_err());
}

proptest! {
    #[test]
    fn product_codec_round_trips(a in 0usize..6, b in 0usize..5) {
        let g = make_direct_product(&make_cyclic(6).unwrap(), &make_cyclic(5).unwrap()).unwrap();
        let idx = g.product_element(a, b).unwrap();
        prop_assert_eq!(g.product_pair(idx).unwrap(), (a, b));
    }

    #[test]
    fn cyclic_mul_is_addition(n in 1usize..64, a in 0usize..64, b in 0usize..64) {
        let g = make_cyclic(n).unwrap();
        let (a, b) = (a % n, b % n);
        prop_assert_eq!(g.mul(a, b), (a + b) % n);
        prop_assert_eq!(g.mul(a, g.inv(a)), 0);
    }
}
