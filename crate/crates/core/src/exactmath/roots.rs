//! Certified complex root enclosures for rational polynomials.
//!
//! Each irreducible factor is handled separately. Linear factors give exact
//! rational roots. Cyclotomic factors are recognized by comparison with Φₖ
//! and put exactly on the unit circle. Other factors are approximated by the
//! Aberth iteration; each approximation z gets the inclusion disk of radius
//! d·|f(z)|/|∏(z − zⱼ)|, with f(z) evaluated exactly. For a reciprocal
//! factor, the number of roots on the circle is fixed exactly by a Sturm
//! count of the trace polynomial on (−2, 2).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::factor::factor_rational_poly;
use super::poly::{cyclotomic, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CirclePosition {
    Inside,
    On,
    Outside,
    Undecided,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootEnclosure {
    pub re: f64,
    pub im: f64,
    /// a root lies in the closed disk of this radius around (re, im)
    pub radius: f64,
    pub multiplicity: u32,
    pub position: CirclePosition,
}

impl RootEnclosure {
    fn modulus_bounds(&self) -> (f64, f64) {
        if self.position == CirclePosition::On {
            return (1.0, 1.0);
        }
        let m = self.re.hypot(self.im);
        ((m - self.radius).max(0.0) * (1.0 - 1e-15), (m + self.radius) * (1.0 + 1e-15))
    }
}

/// Closed interval of reals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True unless self is certainly greater than other.
    pub fn possibly_le(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi
    }

    pub fn ln(&self) -> Enclosure {
        let down = |x: f64| if x > 0.0 { x.ln() - 1e-15 * x.ln().abs() - 1e-300 } else { f64::NEG_INFINITY };
        let up = |x: f64| if x > 0.0 { x.ln() + 1e-15 * x.ln().abs() + 1e-300 } else { f64::NEG_INFINITY };
        if self.lo == self.hi && self.lo == 1.0 {
            return Enclosure::exact(0.0);
        }
        Enclosure { lo: down(self.lo), hi: up(self.hi) }
    }
}

fn phi(k: usize) -> usize {
    let mut n = k;
    let mut out = k;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// k with f = Φₖ, if any. φ(k) ≥ √(k/2), so k ≤ 2d².
pub fn cyclotomic_index(f: &RatPoly) -> Option<usize> {
    let d = f.deg();
    (1..=2 * d * d + 2).find(|&k| phi(k) == d && &cyclotomic(k) == f)
}

fn is_reciprocal(f: &RatPoly) -> bool {
    let c = f.coeffs();
    let n = c.len();
    (0..n).all(|i| c[i] == c[n - 1 - i])
}

/// q with f(x) = x^m q(x + 1/x), for reciprocal f of degree 2m.
fn trace_polynomial(f: &RatPoly) -> RatPoly {
    let m = f.deg() / 2;
    let y = RatPoly::x();
    let two = RatPoly::constant(BigRational::from_integer(2.into()));
    let mut t_prev = two;
    let mut t_cur = y.clone();
    let mut q = RatPoly::constant(f.coeff(m));
    for k in 1..=m {
        q = &q + &t_cur.scale(&f.coeff(m + k));
        let next = &(&y * &t_cur) - &t_prev;
        t_prev = t_cur;
        t_cur = next;
    }
    q
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots of a square-free q in (a, b], by Sturm's theorem.
pub fn sturm_count(q: &RatPoly, a: &BigRational, b: &BigRational) -> usize {
    let mut seq = vec![q.clone(), q.derivative()];
    while !seq.last().expect("nonempty").is_zero() && seq.last().expect("nonempty").deg() > 0 {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    sign_changes(&seq, a) - sign_changes(&seq, b)
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(if x.is_positive() { f64::INFINITY } else { f64::NEG_INFINITY })
}

fn eval_c(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth iteration on a monic polynomial with f64 coefficients.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let r0 = bound.min(2.0 * coeffs[0].abs().powf(1.0 / d as f64).max(0.5));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(r0, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_c(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

fn exact_residual(f: &RatPoly, z: Complex64) -> f64 {
    let a = BigRational::from_float(z.re).unwrap_or_else(BigRational::zero);
    let b = BigRational::from_float(z.im).unwrap_or_else(BigRational::zero);
    let mut pr = BigRational::zero();
    let mut pi = BigRational::zero();
    for c in f.coeffs().iter().rev() {
        let nr = &pr * &a - &pi * &b + c;
        let ni = &pr * &b + &pi * &a;
        pr = nr;
        pi = ni;
    }
    to_f64(&pr).hypot(to_f64(&pi))
}

fn enclose_factor(f: &RatPoly, mult: u32, out: &mut Vec<RootEnclosure>) {
    let d = f.deg();
    if d == 1 {
        let r = -f.coeff(0);
        let pos = match r.abs().cmp(&BigRational::one()) {
            std::cmp::Ordering::Less => CirclePosition::Inside,
            std::cmp::Ordering::Equal => CirclePosition::On,
            std::cmp::Ordering::Greater => CirclePosition::Outside,
        };
        out.push(RootEnclosure { re: to_f64(&r), im: 0.0, radius: 0.0, multiplicity: mult, position: pos });
        return;
    }
    if let Some(k) = cyclotomic_index(f) {
        for j in (1..=k).filter(|j| num_integer::gcd(*j, k) == 1) {
            let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64);
            out.push(RootEnclosure {
                re: z.re,
                im: z.im,
                radius: 1e-15,
                multiplicity: mult,
                position: CirclePosition::On,
            });
        }
        return;
    }
    let coeffs: Vec<f64> = f.coeffs().iter().map(to_f64).collect();
    let z = aberth(&coeffs);
    let mut encl: Vec<RootEnclosure> = (0..d)
        .map(|i| {
            let prod: f64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).norm()).product();
            let radius = d as f64 * exact_residual(f, z[i]) / prod * (1.0 + 1e-10) + 1e-300;
            let m = z[i].norm();
            let position = if m - radius > 1.0 {
                CirclePosition::Outside
            } else if m + radius < 1.0 {
                CirclePosition::Inside
            } else {
                CirclePosition::Undecided
            };
            RootEnclosure { re: z[i].re, im: z[i].im, radius, multiplicity: mult, position }
        })
        .collect();
    for i in 0..d {
        for j in 0..d {
            let gap = (z[i] - z[j]).norm();
            if i != j && gap <= encl[i].radius + encl[j].radius {
                encl[i].position = CirclePosition::Undecided;
            }
        }
    }
    if is_reciprocal(f) {
        let two = BigRational::from_integer(BigInt::from(2));
        let on = 2 * sturm_count(&trace_polynomial(f), &-two.clone(), &two);
        let off = (d - on) / 2;
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm()));
        for (rank, &i) in order.iter().enumerate() {
            let claim = if rank < off {
                CirclePosition::Inside
            } else if rank < off + on {
                CirclePosition::On
            } else {
                CirclePosition::Outside
            };
            let e = &mut encl[i];
            if e.position == CirclePosition::Undecided || e.position == claim {
                e.position = claim;
            } else {
                e.position = CirclePosition::Undecided;
            }
        }
    }
    out.extend(encl);
}

/// Root enclosures of a nonzero polynomial, with multiplicities.
pub fn certified_roots(p: &RatPoly) -> Vec<RootEnclosure> {
    let mut out = Vec::new();
    if p.deg() == 0 {
        return out;
    }
    for (f, m) in factor_rational_poly(p) {
        enclose_factor(&f, m, &mut out);
    }
    out
}

/// Σ log|λ| over roots outside the unit circle (log of the Mahler measure of
/// the monic polynomial).
pub fn log_mahler_measure(p: &RatPoly) -> Enclosure {
    certified_roots(p).iter().fold(Enclosure::exact(0.0), |acc, r| {
        if matches!(r.position, CirclePosition::On | CirclePosition::Inside) {
            return acc;
        }
        let (lo, hi) = r.modulus_bounds();
        let l = Enclosure { lo, hi }.ln();
        let k = r.multiplicity as f64;
        Enclosure { lo: acc.lo + k * l.lo.max(0.0), hi: acc.hi + k * l.hi.max(0.0) }
    })
}

/// max |λ| over the roots; 0 for a constant polynomial.
pub fn max_root_modulus(p: &RatPoly) -> Enclosure {
    certified_roots(p).iter().fold(Enclosure::exact(0.0), |acc, r| {
        let (lo, hi) = r.modulus_bounds();
        Enclosure { lo: acc.lo.max(lo), hi: acc.hi.max(hi) }
    })
}
