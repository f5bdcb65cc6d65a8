//! Factorization of univariate rational polynomials.
//!
//! Square-free decomposition over Q, then for each square-free part:
//! factorization modulo a small prime (distinct-degree + Cantor–Zassenhaus),
//! Hensel lifting past twice the Mignotte bound, and recombination of the
//! lifted modular factors by subset search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::RatPoly;

/// Irreducible monic factors with multiplicities, sorted by degree then
/// coefficients. The leading coefficient of the input is dropped.
pub fn factor_rational_poly(p: &RatPoly) -> Vec<(RatPoly, u32)> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (sqf, mult) in p.squarefree_decomposition() {
        let ints = sqf.primitive_integer();
        for f in factor_squarefree_integer(&ints) {
            out.push((RatPoly::from_bigints(&f).monic(), mult));
        }
    }
    out.sort_by(|(a, ma), (b, mb)| {
        a.deg().cmp(&b.deg()).then_with(|| poly_key(a).cmp(&poly_key(b))).then(ma.cmp(mb))
    });
    out
}

fn poly_key(p: &RatPoly) -> Vec<(BigInt, BigInt)> {
    p.coeffs().iter().map(|c| (c.numer().clone(), c.denom().clone())).collect()
}

pub fn is_irreducible(p: &RatPoly) -> bool {
    let f = factor_rational_poly(p);
    f.len() == 1 && f[0].1 == 1
}

// ---------------------------------------------------------------------------
// polynomials over Z/p, coefficients low to high, trimmed

type ModPoly = Vec<u64>;

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mp_deg(a: &ModPoly) -> usize {
    a.len().saturating_sub(1)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mp_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mp_add(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn mp_mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn mp_divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    assert!(!b.is_empty());
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + p - c * bc % p) % p;
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn mp_monic(a: &ModPoly, p: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn mp_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = mp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    mp_monic(&x, p)
}

/// Returns `(g, s, t)` with `s a + t b = g`, g monic.
fn mp_xgcd(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s2 = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t2 = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &ModPoly| trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mp_derivative(a: &ModPoly, p: u64) -> ModPoly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn mp_powmod(base: &ModPoly, mut e: BigInt, m: &ModPoly, p: u64) -> ModPoly {
    let mut acc = vec![1u64];
    let mut b = mp_divrem(base, m, p).1;
    let two = BigInt::from(2);
    while !e.is_zero() {
        if e.is_odd() {
            acc = mp_divrem(&mp_mul(&acc, &b, p), m, p).1;
        }
        b = mp_divrem(&mp_mul(&b, &b, p), m, p).1;
        e /= &two;
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &ModPoly, p: u64) -> Vec<(ModPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while mp_deg(&f) >= 2 * (d + 1) {
        d += 1;
        h = mp_powmod(&h, BigInt::from(p), &f, p);
        let g = mp_gcd(&f, &mp_sub(&h, &x, p), p);
        if mp_deg(&g) > 0 {
            out.push((g.clone(), d));
            f = mp_divrem(&f, &g, p).0;
            h = mp_divrem(&h, &f, p).1;
        }
    }
    if mp_deg(&f) > 0 {
        let dd = mp_deg(&f);
        out.push((f, dd));
    }
    out
}

/// Cantor–Zassenhaus split of a product of degree-`d` irreducibles.
fn equal_degree(f: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = mp_deg(f);
    if n == d {
        return vec![f.clone()];
    }
    let e: BigInt = (BigInt::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ModPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if mp_deg(&a) == 0 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, e.clone(), f, p), &vec![1u64], p);
        let g = mp_gcd(f, &b, p);
        if mp_deg(&g) > 0 && mp_deg(&g) < n {
            let h = mp_divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&mp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &ModPoly, p: u64) -> Vec<ModPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, &mut rng));
    }
    out
}

// ---------------------------------------------------------------------------
// integer side

fn to_mod(a: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_mod(a: &ModPoly) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    let mut v: Vec<BigInt> = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Exact division in Z[x]; `None` when `b` does not divide `a`.
fn zdiv(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return None;
    }
    let lc = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + db].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &c * bc;
        }
        q[i] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if a.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|c| c / &content * &sign).collect()
}

/// Lift `f ≡ g h (mod p)` with `g` monic to modulus `p^k`.
fn hensel_two(
    f: &[BigInt],
    g: &ModPoly,
    h: &ModPoly,
    p: u64,
    k: u32,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s, t) = mp_xgcd(g, h, p);
    debug_assert_eq!(one, vec![1u64]);
    let pb = BigInt::from(p);
    let mut gl = from_mod(g);
    let mut hl = from_mod(h);
    let mut m = pb.clone();
    for _ in 1..k {
        // e = (f - g h) / m  (mod p)
        let prod = zp_mul(&gl, &hl, &(&m * &pb * &pb));
        let n = f.len().max(prod.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default())
            .collect();
        let e: Vec<BigInt> = diff.iter().map(|c| c / &m).collect();
        let e = to_mod(&e, p);
        let te = mp_mul(&t, &e, p);
        let (q, r) = mp_divrem(&te, g, p);
        let dg = r;
        let dh = mp_add(&mp_mul(&s, &e, p), &mp_mul(&q, h, p), p);
        let mp = &m * &pb;
        gl = add_scaled(&gl, &dg, &m, &mp);
        hl = add_scaled(&hl, &dh, &m, &mp);
        m = mp;
    }
    (gl, hl)
}

fn add_scaled(a: &[BigInt], d: &ModPoly, m: &BigInt, modulus: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(d.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = BigInt::from(d.get(i).copied().unwrap_or(0));
            (x + y * m).mod_floor(modulus)
        })
        .collect()
}

/// Lift a full factorization `f ≡ lc · Π factors (mod p)` (factors monic)
/// to monic factors modulo `p^k`.
fn hensel_multi(f: &[BigInt], factors: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        // f / lc mod p^k
        let modulus = BigInt::from(p).pow(k);
        let lc = f.last().unwrap();
        let inv = mod_inverse(lc, &modulus);
        return vec![f.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect()];
    }
    let mid = factors.len() / 2;
    let g = factors[..mid].iter().fold(vec![1u64], |acc, x| mp_mul(&acc, x, p));
    let hm = factors[mid..].iter().fold(vec![1u64], |acc, x| mp_mul(&acc, x, p));
    let lc = to_mod(&[f.last().unwrap().clone()], p);
    let h = mp_mul(&hm, &lc, p);
    let (gl, hl) = hensel_two(f, &g, &h, p, k);
    let mut out = hensel_multi(&gl, &factors[..mid], p, k);
    out.extend(hensel_multi(&hl, &factors[mid..], p, k));
    out
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

const SMALL_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Factor a primitive squarefree integer polynomial into primitive
/// irreducible integer factors.
fn factor_squarefree_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f.to_vec()];
    }
    // pick the prime with fewest modular factors among a handful of candidates
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter().chain([101u64, 103, 107, 109, 113, 127, 131, 137, 139, 149].iter()) {
        let fm = to_mod(f, p);
        if mp_deg(&fm) != deg {
            continue;
        }
        if mp_deg(&mp_gcd(&fm, &mp_derivative(&fm, p), p)) > 0 {
            continue;
        }
        let facs = factor_mod_p(&mp_monic(&fm, p), p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, modular) = best.expect("no suitable prime found for a squarefree polynomial");

    // Mignotte-style bound on coefficients of any factor, times lc
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << deg) * (norm2.sqrt() + 1u32) * f.last().unwrap().abs();
    let limit = bound * 2u32;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= limit {
        modulus *= &pb;
        k += 1;
    }
    let mut lifted = hensel_multi(f, &modular, p, k);

    let mut found = Vec::new();
    let mut rest = f.to_vec();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progressed = false;
        let r = lifted.len();
        for subset in subsets(r, size) {
            let lc = rest.last().unwrap().clone();
            let cand = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| zp_mul(&acc, &lifted[i], &modulus));
            let cand = primitive(&symmetric(&cand, &modulus));
            if let Some(q) = zdiv(&rest, &cand) {
                found.push(cand);
                rest = q;
                let keep: Vec<Vec<BigInt>> = lifted
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                lifted = keep;
                progressed = true;
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    found.push(primitive(&rest));
    found
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rational roots of a nonzero polynomial (rational root theorem).
pub fn rational_roots(p: &RatPoly) -> Vec<BigRational> {
    factor_rational_poly(p)
        .into_iter()
        .filter(|(f, _)| f.deg() == 1)
        .map(|(f, _)| -f.coeff(0))
        .collect()
}
