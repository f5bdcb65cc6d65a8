//! Wedderburn blocks of a commutant algebra and their unit-group type.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CommutantAlgebra, RepError};
use crate::exactmath::{factor_rational_poly, minpoly, RatMatrix, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BlockKind {
    RationalField,
    ImaginaryQuadratic,
    DefiniteQuaternion,
    InfiniteUnits,
}

impl BlockKind {
    pub fn has_finite_units(self) -> bool {
        !matches!(self, BlockKind::InfiniteUnits)
    }
}

/// Whether a simple block is a division algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Division {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub dimension: usize,
    pub center_degree: usize,
    pub center_minpoly: String,
    pub commutative: bool,
    pub kind: BlockKind,
    pub division: Division,
    #[serde(skip)]
    pub idempotent: RatMatrix,
    #[serde(skip)]
    pub basis: Vec<RatMatrix>,
}

fn flatten(ms: &[RatMatrix]) -> RatMatrix {
    let len = ms.first().map_or(0, |m| m.entries().len());
    let mut out = RatMatrix::zeros(len, ms.len());
    for (j, m) in ms.iter().enumerate() {
        for (i, e) in m.entries().iter().enumerate() {
            out[(i, j)] = e.clone();
        }
    }
    out
}

/// Linearly independent subset spanning the same space.
fn independent(ms: Vec<RatMatrix>) -> Vec<RatMatrix> {
    if ms.is_empty() {
        return ms;
    }
    let (_, pivots) = flatten(&ms).rref();
    pivots.into_iter().map(|p| ms[p].clone()).collect()
}

fn combine(basis: &[RatMatrix], coeffs: &[BigRational]) -> RatMatrix {
    let n = basis[0].rows();
    basis.iter().zip(coeffs).fold(RatMatrix::zeros(n, n), |acc, (b, c)| &acc + &b.scale(c))
}

/// Basis of the center of the algebra.
pub fn center(a: &CommutantAlgebra) -> Vec<RatMatrix> {
    let b = &a.basis;
    let k = b.len();
    let n2 = b[0].entries().len();
    let mut sys = RatMatrix::zeros(n2 * k, k);
    for (j, bj) in b.iter().enumerate() {
        for (i, bi) in b.iter().enumerate() {
            let c = &(bi * bj) - &(bj * bi);
            for (r, e) in c.entries().iter().enumerate() {
                sys[(j * n2 + r, i)] = e.clone();
            }
        }
    }
    sys.nullspace().iter().map(|c| combine(b, c)).collect()
}

const TRIALS_PER_RANGE: usize = 8;
const RANGE_DOUBLINGS: usize = 4;

/// A center element whose minimal polynomial is squarefree of degree equal
/// to the center dimension.
pub fn generic_center_element(center: &[RatMatrix], seed: u64) -> Result<(RatMatrix, RatPoly), RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut range = 5i64;
    for _ in 0..=RANGE_DOUBLINGS {
        for _ in 0..TRIALS_PER_RANGE {
            let coeffs: Vec<BigRational> =
                center.iter().map(|_| BigRational::from_integer(rng.gen_range(-range..=range).into())).collect();
            let z = combine(center, &coeffs);
            let m = minpoly(&z);
            if m.deg() == center.len() && m.is_squarefree() {
                return Ok((z, m));
            }
        }
        range *= 2;
    }
    Err(RepError::GenericElementFailure)
}

fn matrix_trace(m: &RatMatrix) -> BigRational {
    m.trace()
}

pub fn block_decomposition(a: &CommutantAlgebra, seed: u64) -> Result<Vec<BlockReport>, RepError> {
    let z_basis = center(a);
    let (z, m) = generic_center_element(&z_basis, seed)?;
    let factors: Vec<RatPoly> = factor_rational_poly(&m).into_iter().map(|(f, _)| f).collect();
    let mut out = Vec::new();
    for (j, p) in factors.iter().enumerate() {
        let others = factors
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != j)
            .fold(RatPoly::one(), |acc, (_, f)| &acc * f);
        let (_, s, _) = others.ext_gcd(p);
        let q = (&s * &others).rem(&m);
        let e = q.eval_matrix(&z);
        let basis = independent(a.basis.iter().map(|b| b * &e).collect());
        let dim = basis.len();
        let commutative = basis.iter().all(|x| basis.iter().all(|y| (x * y) == (y * x)));
        let center_degree = p.deg();
        let (kind, division) = classify(&basis, &e, p, commutative);
        out.push(BlockReport {
            dimension: dim,
            center_degree,
            center_minpoly: p.to_string(),
            commutative,
            kind,
            division,
            idempotent: e,
            basis,
        });
    }
    Ok(out)
}

fn classify(basis: &[RatMatrix], e: &RatMatrix, p: &RatPoly, commutative: bool) -> (BlockKind, Division) {
    let dim = basis.len();
    if commutative {
        let kind = match dim {
            1 => BlockKind::RationalField,
            2 if p.quadratic_discriminant().is_some_and(|d| d.is_negative()) => BlockKind::ImaginaryQuadratic,
            _ => BlockKind::InfiniteUnits,
        };
        return (kind, Division::Yes);
    }
    let cdeg = p.deg();
    let d2 = dim / cdeg;
    if cdeg == 1 && dim == 4 {
        let g = norm_form(basis, e);
        if g.is_positive_definite() {
            return (BlockKind::DefiniteQuaternion, Division::Yes);
        }
        let div = if quaternion_is_division(basis, e) { Division::Yes } else { Division::No };
        return (BlockKind::InfiniteUnits, div);
    }
    // over Q the Schur index is at most 2, so a center-Q block of degree > 2 is split
    let div = if cdeg == 1 && d2 > 4 { Division::No } else { Division::Unknown };
    (BlockKind::InfiniteUnits, div)
}

/// Gram matrix of the reduced norm on a dimension-4 central simple block.
pub fn norm_form(basis: &[RatMatrix], e: &RatMatrix) -> RatMatrix {
    let w = matrix_trace(e);
    let two = BigRational::from_integer(2.into());
    let trd = |x: &RatMatrix| matrix_trace(x) * &two / &w;
    let k = basis.len();
    let mut g = RatMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let v = (trd(&basis[i]) * trd(&basis[j]) - trd(&(&basis[i] * &basis[j]))) / &two;
            g[(i, j)] = v;
        }
    }
    g
}

/// Quaternion algebra over Q is a division algebra iff the norm form on
/// trace-zero elements is anisotropic, decided by Hilbert symbols.
fn quaternion_is_division(basis: &[RatMatrix], e: &RatMatrix) -> bool {
    let g = norm_form(basis, e);
    let k = basis.len();
    let mut t = RatMatrix::zeros(1, k);
    for (i, b) in basis.iter().enumerate() {
        t[(0, i)] = matrix_trace(b);
    }
    let null = t.nullspace();
    let mut nm = RatMatrix::zeros(k, null.len());
    for (j, v) in null.iter().enumerate() {
        for i in 0..k {
            nm[(i, j)] = v[i].clone();
        }
    }
    let g0 = &(&nm.transpose() * &g) * &nm;
    let (_, d) = g0.congruence_diagonalize();
    let (a, b) = (-(&d[0] * &d[1]), -(&d[0] * &d[2]));
    !ternary_isotropic(&a, &b)
}

/// `<1, −a, −b>` is isotropic over Q iff (a,b)_v = 1 at every place.
pub fn ternary_isotropic(a: &BigRational, b: &BigRational) -> bool {
    let a = square_class(a);
    let b = square_class(b);
    if a.is_zero() || b.is_zero() {
        return true;
    }
    let mut primes = vec![BigInt::from(2)];
    for x in [&a, &b] {
        for p in prime_factors(x) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    let inf = hilbert_infinity(&a, &b);
    let finite: Vec<i32> = primes.iter().map(|p| hilbert_symbol(&a, &b, p)).collect();
    debug_assert_eq!(finite.iter().product::<i32>() * inf, 1, "Hilbert reciprocity");
    inf == 1 && finite.iter().all(|&s| s == 1)
}

/// Squarefree integer in the same square class.
fn square_class(x: &BigRational) -> BigInt {
    let n = x.numer() * x.denom();
    if n.is_zero() {
        return n;
    }
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factor_int(&n.abs()) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    out
}

fn factor_int(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    factor_int(&n.abs()).into_iter().map(|(p, _)| p).collect()
}

fn hilbert_infinity(a: &BigInt, b: &BigInt) -> i32 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}

fn legendre(u: &BigInt, p: &BigInt) -> i32 {
    let e = (p - 1) / 2;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn split_valuation(x: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut x = x.clone();
    let mut v = 0;
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// Hilbert symbol (a,b)_p for nonzero integers.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, p: &BigInt) -> i32 {
    let (alpha, u) = split_valuation(a, p);
    let (beta, v) = split_valuation(b, p);
    if *p == BigInt::from(2) {
        let eps = |x: &BigInt| ((x - 1i32) / 2i32).mod_floor(&BigInt::from(2)).to_u32().unwrap();
        let omega = |x: &BigInt| ((x * x - 1i32) / 8i32).mod_floor(&BigInt::from(2)).to_u32().unwrap();
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let eps_p = ((p - 1i32) / 2i32).mod_floor(&BigInt::from(2)).to_u32().unwrap();
        let mut s = if (alpha * beta * eps_p) % 2 == 0 { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hilbert_symbols() {
        // Hamilton quaternions (−1,−1) ramify at 2 and ∞
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), &b(2)), -1);
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), &b(3)), 1);
        // (2,3) ramifies at 2 and 3
        assert_eq!(hilbert_symbol(&b(2), &b(3), &b(3)), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), &b(2)), -1);
        assert_eq!(hilbert_symbol(&b(1), &b(5), &b(5)), 1);
    }

    #[test]
    fn isotropy() {
        let r = |x: i64| BigRational::from_integer(x.into());
        assert!(!ternary_isotropic(&r(-1), &r(-1)));
        assert!(ternary_isotropic(&r(1), &r(7)));
        assert!(!ternary_isotropic(&r(2), &r(3)));
        assert!(ternary_isotropic(&r(2), &r(7)));
    }
}
