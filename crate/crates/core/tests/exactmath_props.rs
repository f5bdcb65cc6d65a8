use crystalkit_core::exactmath::{
    charpoly, factor_rational_poly, kernel_basis, log_mahler_measure, smith, solve_integer_linear, to_rat, IntMatrix,
    RatPoly,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-range..=range, rows * cols).prop_map(move |v| {
        IntMatrix::from_rows(v.chunks(cols).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    })
}

fn shaped(max: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| matrix(r, c, range))
}

fn square(max: usize, range: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(move |n| matrix(n, n, range))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(a in shaped(4, 6)) {
        let s = smith(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let divs = s.divisors();
        prop_assert!(divs.iter().all(|d| !d.is_negative()));
        for w in divs.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
    }

    #[test]
    fn determinant_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (matrix(n, n, 5), matrix(n, n, 5)))) {
        prop_assert_eq!((&a * &b).det(), a.det() * b.det());
        prop_assert_eq!(to_rat(&a).det_rat(), num_rational::BigRational::from_integer(a.det()));
    }

    #[test]
    fn kernel_basis_spans_the_integer_kernel(a in shaped(4, 4)) {
        let k = kernel_basis(&a);
        let rank = smith(&a).rank();
        prop_assert_eq!(k.len(), a.cols() - rank);
        for v in &k {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn integer_solutions_solve_the_system(a in shaped(4, 5), x in proptest::collection::vec(-5i64..=5, 4)) {
        let x: Vec<BigInt> = x.into_iter().take(a.cols()).chain(std::iter::repeat(0)).take(a.cols()).map(BigInt::from).collect();
        let b = a.mul_vec(&x);
        let sol = solve_integer_linear(&a, &b).unwrap();
        prop_assert_eq!(a.mul_vec(&sol.particular), b);
    }

    #[test]
    fn cayley_hamilton(a in square(4, 4)) {
        let r = to_rat(&a);
        let p = charpoly(&r);
        prop_assert_eq!(p.deg(), a.rows());
        prop_assert!(p.eval_matrix(&r).is_zero());
    }

    #[test]
    fn factorization_multiplies_back(roots in proptest::collection::vec(-4i64..=4, 1..4), extra in proptest::collection::vec(-3i64..=3, 0..3)) {
        let mut p = roots.iter().fold(RatPoly::one(), |acc, &r| &acc * &RatPoly::from_ints(&[-r, 1]));
        let mut q = extra.clone();
        q.push(1);
        p = &p * &RatPoly::from_ints(&q);
        let f = factor_rational_poly(&p);
        let back = f.iter().fold(RatPoly::one(), |acc, (g, e)| &acc * &g.pow(*e));
        prop_assert_eq!(back, p.monic());
    }

    #[test]
    fn mahler_measure_of_integer_roots(roots in proptest::collection::vec(-6i64..=6, 1..5)) {
        let p = roots.iter().fold(RatPoly::one(), |acc, &r| &acc * &RatPoly::from_ints(&[-r, 1]));
        let want: f64 = roots.iter().filter(|r| r.abs() > 1).map(|r| (r.abs() as f64).ln()).sum();
        let m = log_mahler_measure(&p);
        prop_assert!(m.lo <= want + 1e-12 && want - 1e-12 <= m.hi, "{:?} vs {}", m, want);
    }
}

#[test]
fn smith_of_known_matrix() {
    let a = IntMatrix::from_rows(vec![
        vec![2.into(), 4.into(), 4.into()],
        vec![(-6).into(), 6.into(), 12.into()],
        vec![10.into(), (-4).into(), (-16).into()],
    ]);
    let d: Vec<BigInt> = smith(&a).divisors();
    assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
}
