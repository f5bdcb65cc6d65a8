//! Elements of the cyclotomic field Q(ζ_e), stored densely in the power basis
//! 1, ζ, …, ζ^{φ(e)-1} and reduced modulo Φ_e.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::{cyclotomic, RatPoly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: usize,
    /// reduced coefficients, length φ(order)
    coeffs: Vec<BigRational>,
    modulus: Arc<RatPoly>,
}

/// Shared context for one conductor: holds Φ_e.
#[derive(Clone, Debug)]
pub struct CycloField {
    order: usize,
    modulus: Arc<RatPoly>,
}

impl CycloField {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        Self { order, modulus: Arc::new(cyclotomic(order)) }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    fn reduce(&self, coeffs: Vec<BigRational>) -> Cyclo {
        let p = RatPoly::new(coeffs).rem(&self.modulus);
        let mut c = p.coeffs().to_vec();
        c.resize(self.degree(), BigRational::zero());
        Cyclo { order: self.order, coeffs: c, modulus: self.modulus.clone() }
    }

    pub fn zero(&self) -> Cyclo {
        self.reduce(Vec::new())
    }

    pub fn rational(&self, r: BigRational) -> Cyclo {
        self.reduce(vec![r])
    }

    pub fn int(&self, r: i64) -> Cyclo {
        self.rational(BigRational::from_integer(r.into()))
    }

    /// ζ^k
    pub fn zeta_pow(&self, k: i64) -> Cyclo {
        let k = k.mod_floor(&(self.order as i64)) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        self.reduce(v)
    }

    /// Σ m_j ζ^j
    pub fn from_eigen_multiplicities(&self, mult: &[i64]) -> Cyclo {
        let v = mult.iter().map(|&m| BigRational::from_integer(m.into())).collect();
        self.reduce(v)
    }
}

impl Cyclo {
    fn field(&self) -> CycloField {
        CycloField { order: self.order, modulus: self.modulus.clone() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            modulus: self.modulus.clone(),
        }
    }

    pub fn sub(&self, o: &Cyclo) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
            modulus: self.modulus.clone(),
        }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        let n = self.coeffs.len();
        let mut out = vec![BigRational::zero(); (2 * n).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        self.field().reduce(out)
    }

    pub fn scale(&self, r: &BigRational) -> Cyclo {
        Cyclo {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
            modulus: self.modulus.clone(),
        }
    }

    /// Galois automorphism ζ ↦ ζ^k, gcd(k, e) = 1.
    pub fn galois(&self, k: i64) -> Cyclo {
        let f = self.field();
        let mut acc = f.zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&f.zeta_pow(k * i as i64).scale(a));
        }
        acc
    }

    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Complex approximation, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let theta = std::f64::consts::TAU / self.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (i, a)| {
            let a = a.to_f64().unwrap_or(f64::NAN);
            (re + a * (theta * i as f64).cos(), im + a * (theta * i as f64).sin())
        })
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*z{}", self.order)?,
                _ => write!(f, "{a}*z{}^{i}", self.order)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourth_roots() {
        let f = CycloField::new(4);
        let i = f.zeta_pow(1);
        assert_eq!(i.mul(&i), f.int(-1));
        assert_eq!(i.conj(), f.zeta_pow(3));
        assert!(!i.is_real());
        assert!(i.add(&i.conj()).is_real());
    }

    #[test]
    fn fifth_roots_sum_to_minus_one() {
        let f = CycloField::new(5);
        let s = (1..5).fold(f.zero(), |acc, k| acc.add(&f.zeta_pow(k)));
        assert_eq!(s, f.int(-1));
    }

    #[test]
    fn galois_is_multiplicative() {
        let f = CycloField::new(12);
        let a = f.zeta_pow(1).add(&f.int(2));
        let b = f.zeta_pow(5).sub(&f.zeta_pow(2));
        assert_eq!(a.mul(&b).galois(5), a.galois(5).mul(&b.galois(5)));
    }
}
