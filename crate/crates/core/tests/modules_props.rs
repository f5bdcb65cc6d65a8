use crystalkit_core::crystal::{build_crystal, rat_vec};
use crystalkit_core::dynamics::{count_fixed_points, ec_check, endo_with_linear, fixed_point_data, validate_endo};
use crystalkit_core::exactmath::{int_diag, IntMatrix};
use crystalkit_core::ghw::{amalgam_split, dihedral_quotients};
use crystalkit_core::repanalysis::{mult_free_check, out_finite, IntegralRep};
use crystalkit_core::shell::{catalog_entry, random_reps};
use crystalkit_core::spin::spin_structures;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn square(n: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-range..=range, n * n).prop_map(move |v| {
        IntMatrix::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdicts_survive_conjugation(seed in 0u64..1000) {
        let (_, rho) = random_reps(seed, 1).unwrap().remove(0);
        let n = rho.degree();
        let mut u = IntMatrix::identity(n);
        if n > 1 {
            u[(0, n - 1)] = BigInt::from(2);
            u[(n - 1, 0)] = BigInt::from(1);
            u[(n - 1, n - 1)] = BigInt::from(3);
        }
        let conj = rho.conjugate(&u).unwrap();
        prop_assert_eq!(out_finite(&rho).unwrap().verdict, out_finite(&conj).unwrap().verdict);
        prop_assert_eq!(mult_free_check(&rho).unwrap(), mult_free_check(&conj).unwrap());
    }

    #[test]
    fn torus_maps_match_the_oracle(f in (1usize..=3).prop_flat_map(|n| square(n, 3))) {
        let n = f.rows();
        let t = build_crystal("t", n, &[], &[], 1).unwrap();
        let e = validate_endo(&t, &f, &vec![BigRational::zero(); n]).unwrap();
        let fp = fixed_point_data(&t, &e);
        let l = (&IntMatrix::identity(n) - &f).det();
        prop_assert_eq!(&fp.lefschetz, &l);
        prop_assert_eq!(&fp.nielsen, &l.abs());
        if !l.is_zero() {
            prop_assert_eq!(count_fixed_points(&t, &e).map(BigInt::from), Some(l.abs()));
        }
        prop_assert!(ec_check(&t, &e).holds);
    }

    #[test]
    fn klein_diagonal_maps(a in -4i64..=4, b in -4i64..=4) {
        let k = catalog_entry("klein").unwrap().unwrap().group;
        let f = int_diag(&[a, b]);
        if let Some(e) = endo_with_linear(&k, &f) {
            let fp = fixed_point_data(&k, &e);
            prop_assert!(fp.nielsen >= fp.lefschetz.abs());
            if !fp.degenerate {
                prop_assert_eq!(count_fixed_points(&k, &e).map(BigInt::from), Some(fp.nielsen.clone()));
            }
            prop_assert!(ec_check(&k, &e).holds);
        } else {
            // the linear part must send the holonomy generator's lift into Γ
            prop_assert!(a % 2 == 0);
        }
    }
}

#[test]
fn spin_counts_multiply_over_products() {
    let hw = catalog_entry("hw3").unwrap().unwrap().group;
    let sq = catalog_entry("hw3xhw3").unwrap().unwrap().group;
    let a = spin_structures(&hw).unwrap().count;
    assert_eq!(spin_structures(&sq).unwrap().count, a * a);
}

#[test]
fn every_dihedral_split_has_index_two_factors() {
    for name in ["hw3", "g2", "b3", "b4"] {
        let g = catalog_entry(name).unwrap().unwrap().group;
        for epi in dihedral_quotients(&g) {
            let s = amalgam_split(&g, &epi).unwrap();
            let two = BigRational::from_integer(2.into());
            assert_eq!((&s.index1, &s.index2), (&two, &two), "{name}");
            assert_eq!(s.x.dim(), g.dim() - 1);
        }
    }
}

#[test]
fn trivial_group_rep_of_circle() {
    let rho = IntegralRep::new(&[int_diag(&[1])], 1).unwrap();
    assert_eq!(out_finite(&rho).unwrap().verdict, crystalkit_core::repanalysis::Verdict::Finite);
    let k = build_crystal("k", 2, &[int_diag(&[1, -1])], &[rat_vec(&[(1, 2), (0, 1)])], 2).unwrap();
    assert!(k.is_torsion_free());
}
