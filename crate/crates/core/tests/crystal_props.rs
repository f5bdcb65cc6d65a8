use crystalkit_core::crystal::{
    cohomology::{bar_cohomology, cohomology_module, GroupModule},
    torsion_free_classes, CrystalGroup, GroupElement,
};
use crystalkit_core::exactmath::{int_diag, int_matrix, IntMatrix};
use crystalkit_core::groups::close_group;
use crystalkit_core::shell::{catalog_entry, THREE_DIMENSIONAL};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn entry(name: &str) -> CrystalGroup {
    catalog_entry(name).unwrap().unwrap().group
}

/// Product of elementary row operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, c) in ops {
            if i == j {
                continue;
            }
            for k in 0..n {
                let add = BigInt::from(c) * &u[(j, k)];
                u[(i, k)] += add;
            }
        }
        u
    })
}

fn random_element(g: &CrystalGroup, word: &[(usize, i64, bool)]) -> GroupElement {
    word.iter().fold(g.identity(), |acc, &(h, t, inv)| {
        let h = h % g.holonomy_order();
        let mut z = vec![BigInt::from(0); g.dim()];
        z[0] = BigInt::from(t);
        let step = g.compose(&g.lift(h), &g.translation(&z));
        g.compose(&acc, &if inv { g.inverse(&step) } else { step })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fingerprint_is_invariant_under_basis_change(idx in 0usize..10, u in unimodular(3)) {
        let g = entry(THREE_DIMENSIONAL[idx]);
        let h = g.change_basis(&u).unwrap();
        prop_assert_eq!(h.fingerprint(), g.fingerprint());
        prop_assert_eq!(h.is_torsion_free(), g.is_torsion_free());
        prop_assert_eq!(h.center_rank(), g.center_rank());
    }

    #[test]
    fn translation_conjugation_keeps_the_class(idx in 0usize..10, d in proptest::collection::vec((-5i64..=5, 1i64..=6), 3)) {
        let g = entry(THREE_DIMENSIONAL[idx]);
        let d: Vec<BigRational> = d.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect();
        let h = g.conjugate_by_translation(&d).unwrap();
        prop_assert_eq!(h.fingerprint(), g.fingerprint());
        let coh = crystalkit_core::crystal::cohomology(g.holonomy(), 2).unwrap();
        prop_assert_eq!(
            coh.class_of_vector_system(g.generator_vectors()).coords,
            coh.class_of_vector_system(h.generator_vectors()).coords
        );
    }

    #[test]
    fn group_law(idx in 0usize..10, a in proptest::collection::vec((0usize..12, -2i64..=2, any::<bool>()), 0..5),
                 b in proptest::collection::vec((0usize..12, -2i64..=2, any::<bool>()), 0..5),
                 c in proptest::collection::vec((0usize..12, -2i64..=2, any::<bool>()), 0..5)) {
        let g = entry(THREE_DIMENSIONAL[idx]);
        let (x, y, z) = (random_element(&g, &a), random_element(&g, &b), random_element(&g, &c));
        prop_assert!(g.contains(&x));
        prop_assert_eq!(g.compose(&g.compose(&x, &y), &z), g.compose(&x, &g.compose(&y, &z)));
        prop_assert_eq!(g.compose(&x, &g.inverse(&x)), g.identity());
    }

    #[test]
    fn cyclic_groups_with_trivial_coefficients(k in 2usize..=7) {
        // regular permutation representation of Z/k acting trivially on Z
        let mut p = IntMatrix::zeros(k, k);
        for i in 0..k {
            p[((i + 1) % k, i)] = BigInt::from(1);
        }
        let h = close_group(k, &[p], k).unwrap();
        let m = GroupModule::new(&h, &[int_diag(&[1])]).unwrap();
        prop_assert_eq!(cohomology_module(&m, 2).unwrap().divisors, vec![BigInt::from(k)]);
        prop_assert!(cohomology_module(&m, 1).unwrap().divisors.is_empty());
    }
}

#[test]
fn bar_resolution_agrees_with_the_fast_route() {
    let z2 = close_group(1, &[int_diag(&[-1])], 2).unwrap();
    let v4 = close_group(2, &[int_diag(&[-1, 1]), int_diag(&[1, -1])], 4).unwrap();
    let z3 = close_group(2, &[int_matrix(&[&[0, -1], &[1, -1]])], 3).unwrap();
    let z4 = close_group(2, &[int_matrix(&[&[0, -1], &[1, 0]])], 4).unwrap();
    for h in [&z2, &v4, &z3, &z4] {
        let m = GroupModule::natural(h);
        for k in 1..=2 {
            let fast = cohomology_module(&m, k).unwrap().divisors;
            let slow = bar_cohomology(&m, k, 4096).unwrap();
            assert_eq!(fast, slow, "order {} degree {k}", h.order());
        }
    }
}

#[test]
fn klein_four_diagonal_classes() {
    let v4 = close_group(3, &[int_diag(&[1, -1, -1]), int_diag(&[-1, 1, -1])], 4).unwrap();
    let tf = torsion_free_classes(&v4, 1 << 10).unwrap();
    assert!(!tf.groups.is_empty());
    for (_, g) in &tf.groups {
        assert!(g.is_torsion_free());
        assert!(g.is_torsion_free_by_restriction());
        assert_eq!(g.abelianization().to_string(), "Z/4 + Z/4");
    }
    for (_, t) in &tf.rejected {
        assert_ne!(t.holonomy, 0);
    }
}

#[test]
fn ten_three_dimensional_groups() {
    let mut fps: Vec<_> = THREE_DIMENSIONAL.iter().map(|n| entry(n).fingerprint()).collect();
    fps.sort();
    fps.dedup();
    assert_eq!(fps.len(), 10);
    let orientable = THREE_DIMENSIONAL.iter().filter(|n| entry(n).is_orientable()).count();
    assert_eq!(orientable, 6);
}
