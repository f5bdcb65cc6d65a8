use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::RatMatrix;

/// Univariate polynomial over Q, coefficients stored from the constant term up.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x - c`
    pub fn linear(c: BigRational) -> Self {
        Self::new(vec![-c, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &RatMatrix) -> RatMatrix {
        let n = m.rows();
        let mut acc = RatMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &RatMatrix::identity(n).scale(c);
        }
        acc
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.deg();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lc = d.leading();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = BigRational::one() / r0.leading();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(x) -> p(c x)`.
    pub fn scale_variable(&self, c: &BigRational) -> Self {
        let mut pw = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::new(out)
    }

    /// Least common multiple of coefficient denominators times self,
    /// divided by the content: a primitive integer polynomial with positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> =
            self.coeffs.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in ints.iter_mut() {
            *c = &*c / &content * &sign;
        }
        ints
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Square-free decomposition (Yun): monic `(factor, multiplicity)` pairs.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, u32)> {
        let f = self.monic();
        if f.deg() == 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0);
        let mut c = fp.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            if b.deg() == 0 {
                break;
            }
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// `b² - 4ac` for a quadratic.
    pub fn quadratic_discriminant(&self) -> Option<BigRational> {
        (self.deg() == 2).then(|| {
            let (c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2));
            &b * &b - BigRational::from_integer(4.into()) * a * c
        })
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(x I - A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &RatMatrix) -> RatPoly {
    let n = a.rows();
    assert!(a.is_square());
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = RatMatrix::zeros(n, n);
    let id = RatMatrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        let c = -am.trace() / BigRational::from_integer(BigInt::from(k));
        coeffs[n - k] = c;
    }
    RatPoly::new(coeffs)
}

/// Minimal polynomial of a square matrix via the Krylov sequence of powers.
pub fn minpoly(a: &RatMatrix) -> RatPoly {
    let n = a.rows();
    let mut powers: Vec<RatMatrix> = vec![RatMatrix::identity(n)];
    loop {
        let k = powers.len();
        // columns = flattened powers; find dependency of the newest one
        let next = &powers[k - 1] * a;
        let mut sys = RatMatrix::zeros(n * n, k);
        for (j, p) in powers.iter().enumerate() {
            for (i, e) in p.entries().iter().enumerate() {
                sys[(i, j)] = e.clone();
            }
        }
        let rhs: Vec<BigRational> = next.entries().to_vec();
        if let Some(sol) = sys.solve(&rhs) {
            let mut coeffs: Vec<BigRational> = sol.into_iter().map(|c| -c).collect();
            coeffs.push(BigRational::one());
            return RatPoly::new(coeffs);
        }
        powers.push(next);
    }
}

/// The k-th cyclotomic polynomial, `k >= 1`.
pub fn cyclotomic(k: usize) -> RatPoly {
    // x^k - 1 divided by all Φ_d, d | k, d < k
    let mut p = RatPoly::new({
        let mut v = vec![BigRational::zero(); k + 1];
        v[0] = -BigRational::one();
        v[k] = BigRational::one();
        v
    });
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = p.exact_div(&cyclotomic(d));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::matrix::{int_matrix, to_rat};

    #[test]
    fn charpoly_of_cat_map() {
        let m = to_rat(&int_matrix(&[&[2, 1], &[1, 1]]));
        assert_eq!(charpoly(&m), RatPoly::from_ints(&[1, -3, 1]));
    }

    #[test]
    fn minpoly_of_scalar_is_linear() {
        let m = to_rat(&int_matrix(&[&[2, 0], &[0, 2]]));
        assert_eq!(minpoly(&m), RatPoly::from_ints(&[-2, 1]));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), RatPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(5), RatPoly::from_ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn squarefree_decomposition_of_power() {
        // (x-1)^2 (x+2)
        let p = &RatPoly::from_ints(&[-1, 1]).pow(2) * &RatPoly::from_ints(&[2, 1]);
        let dec = p.squarefree_decomposition();
        assert_eq!(dec, vec![(RatPoly::from_ints(&[2, 1]), 1), (RatPoly::from_ints(&[-1, 1]), 2)]);
    }
}
