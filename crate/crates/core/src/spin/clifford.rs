//! Clifford algebra of a diagonal rational form, with Pin elements carried
//! as pairs (x, μ) standing for x/√μ.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactmath::{RatMatrix, RatVector};

/// Sparse element Σ c_S e_S, with e_S the ordered product over the bit set S
/// and e_i² = q_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordElement {
    pub terms: BTreeMap<u32, BigRational>,
}

impl CliffordElement {
    pub fn scalar(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        Self { terms }
    }

    pub fn one() -> Self {
        Self::scalar(BigRational::one())
    }

    pub fn vector(v: &[BigRational]) -> Self {
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (1u32 << i, c.clone()))
            .collect();
        Self { terms }
    }

    /// The scalar part when the element is a pure scalar.
    pub fn as_scalar(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    fn monomial_product(s: u32, t: u32, q: &[BigRational]) -> (BigRational, u32) {
        let mut swaps = 0u32;
        for j in 0..32 {
            if t >> j & 1 == 1 {
                swaps += (s >> (j + 1)).count_ones();
            }
        }
        let mut c = if swaps.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() };
        let common = s & t;
        for (i, qi) in q.iter().enumerate() {
            if common >> i & 1 == 1 {
                c *= qi;
            }
        }
        (c, s ^ t)
    }

    pub fn mul(&self, o: &Self, q: &[BigRational]) -> Self {
        let mut terms: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                let (c, m) = Self::monomial_product(*s, *t, q);
                let e = terms.entry(m).or_insert_with(BigRational::zero);
                *e += c * a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }

    /// Reversion: e_S ↦ (−1)^{k(k−1)/2} e_S with k = |S|.
    pub fn reverse(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(s, c)| {
                let k = s.count_ones();
                (*s, if (k * k.saturating_sub(1) / 2) % 2 == 0 { c.clone() } else { -c })
            })
            .collect();
        Self { terms }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|s| s.count_ones() % 2 == 0)
    }

    /// Coordinates of a grade-one element.
    fn vector_part(&self, n: usize) -> Option<RatVector> {
        let mut v = vec![BigRational::zero(); n];
        for (s, c) in &self.terms {
            if s.count_ones() != 1 {
                return None;
            }
            v[s.trailing_zeros() as usize] = c.clone();
        }
        Some(v)
    }
}

/// x/√μ with x·x̃ = μ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PinElement {
    pub x: CliffordElement,
    pub scale: BigRational,
}

impl PinElement {
    pub fn one() -> Self {
        Self { x: CliffordElement::one(), scale: BigRational::one() }
    }

    pub fn neg(&self) -> Self {
        Self { x: CliffordElement { terms: self.x.terms.iter().map(|(s, c)| (*s, -c)).collect() }, scale: self.scale.clone() }
    }

    pub fn mul(&self, o: &Self, q: &[BigRational]) -> Self {
        Self { x: self.x.mul(&o.x, q), scale: &self.scale * &o.scale }
    }

    /// +1 or −1 when the element is ±1, None otherwise.
    pub fn sign(&self) -> Option<i8> {
        let c = self.x.as_scalar()?;
        if &c * &c != self.scale {
            return None;
        }
        Some(if c.is_positive() { 1 } else { -1 })
    }

    /// Sign s with self = s·other, when the two represent ± the same element.
    pub fn ratio_sign(&self, other: &Self, q: &[BigRational]) -> Option<i8> {
        let y = self.x.mul(&other.x.reverse(), q);
        let c = y.as_scalar()?;
        if &c * &c != &self.scale * &other.scale {
            return None;
        }
        Some(if c.is_positive() { 1 } else { -1 })
    }
}

/// The Clifford algebra of (Qⁿ, S) in a basis pᵢ (columns of `basis`) where
/// S becomes diag(q).
#[derive(Clone, Debug, Serialize)]
pub struct CliffordContext {
    pub form: RatMatrix,
    pub basis: RatMatrix,
    pub q: Vec<BigRational>,
    basis_inv: RatMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CliffordError {
    #[error("matrix is not orthogonal for the form")]
    NotOrthogonal,
    #[error("matrix has determinant -1")]
    NotSpecial,
}

impl CliffordContext {
    pub fn new(form: &RatMatrix) -> Self {
        let (basis, q) = form.congruence_diagonalize();
        assert!(q.iter().all(Signed::is_positive), "form must be positive definite");
        let basis_inv = basis.inverse().expect("congruence basis is invertible");
        Self { form: form.clone(), basis, q, basis_inv }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    fn quad(&self, v: &[BigRational]) -> BigRational {
        v.iter().zip(&self.q).map(|(x, q)| x * x * q).sum()
    }

    /// Cartan–Dieudonné: reflect column i of the running matrix back to eᵢ
    /// in order; the reflection vectors multiply to a lift of A.
    pub fn lift(&self, a: &RatMatrix) -> Result<PinElement, CliffordError> {
        let n = self.dim();
        if &(&a.transpose() * &self.form) * a != self.form {
            return Err(CliffordError::NotOrthogonal);
        }
        if a.det_rat() != BigRational::one() {
            return Err(CliffordError::NotSpecial);
        }
        let mut m = &(&self.basis_inv * a) * &self.basis;
        let mut vectors: Vec<RatVector> = Vec::new();
        for i in 0..n {
            let col = m.col(i);
            let v: RatVector = (0..n).map(|j| if j == i { &col[j] - BigRational::one() } else { col[j].clone() }).collect();
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            let qv = self.quad(&v);
            // r_v(u) = u − 2 B(u, v)/Q(v) · v, applied on the left
            let mut r = RatMatrix::identity(n);
            for row in 0..n {
                for c in 0..n {
                    r[(row, c)] -= BigRational::from_integer(2.into()) * &v[row] * &v[c] * &self.q[c] / &qv;
                }
            }
            m = &r * &m;
            vectors.push(v);
        }
        debug_assert!(m.is_identity());
        assert!(vectors.len().is_multiple_of(2), "even number of reflections for det 1");
        let x = vectors.iter().fold(CliffordElement::one(), |acc, v| acc.mul(&CliffordElement::vector(v), &self.q));
        let scale = vectors.iter().map(|v| self.quad(v)).fold(BigRational::one(), |a, b| a * b);
        Ok(PinElement { x, scale })
    }

    /// The matrix of u ↦ x·u·x⁻¹ for even x, in the original coordinates.
    pub fn twisted_action(&self, p: &PinElement) -> RatMatrix {
        assert!(p.x.is_even());
        let n = self.dim();
        let xr = p.x.reverse();
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[i] = BigRational::one();
            let img = p.x.mul(&CliffordElement::vector(&e), &self.q).mul(&xr, &self.q);
            let v = img.vector_part(n).expect("conjugate of a vector is a vector");
            for j in 0..n {
                m[(j, i)] = &v[j] / &p.scale;
            }
        }
        &(&self.basis * &m) * &self.basis_inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_diag, to_rat};

    #[test]
    fn minus_identity_in_dimension_two() {
        let ctx = CliffordContext::new(&RatMatrix::identity(2));
        let p = ctx.lift(&to_rat(&int_diag(&[-1, -1]))).unwrap();
        assert_eq!(p.x.terms.keys().copied().collect::<Vec<_>>(), vec![0b11]);
        assert_eq!(p.mul(&p, &ctx.q).sign(), Some(-1));
        assert_eq!(ctx.twisted_action(&p), to_rat(&int_diag(&[-1, -1])));
    }

    #[test]
    fn coordinate_rotation_and_identity() {
        let ctx = CliffordContext::new(&RatMatrix::identity(3));
        let p = ctx.lift(&to_rat(&int_diag(&[1, -1, -1]))).unwrap();
        assert_eq!(p.x.terms.keys().copied().collect::<Vec<_>>(), vec![0b110]);
        assert_eq!(ctx.lift(&RatMatrix::identity(3)).unwrap(), PinElement::one());
        assert_eq!(ctx.lift(&to_rat(&int_diag(&[1, 1, -1]))), Err(CliffordError::NotSpecial));
        let shear = to_rat(&crate::exactmath::int_matrix(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(ctx.lift(&shear), Err(CliffordError::NotOrthogonal));
    }

    #[test]
    fn norm_is_positive_scalar() {
        let ctx = CliffordContext::new(&RatMatrix::identity(2));
        let rot = to_rat(&crate::exactmath::int_matrix(&[&[0, -1], &[1, 0]]));
        let p = ctx.lift(&rot).unwrap();
        let n = p.x.mul(&p.x.reverse(), &ctx.q).as_scalar().unwrap();
        assert_eq!(n, p.scale);
        assert_eq!(ctx.twisted_action(&p), rot);
        assert_eq!(p.ratio_sign(&p.neg(), &ctx.q), Some(-1));
    }
}
