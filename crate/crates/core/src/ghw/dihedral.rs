//! Epimorphisms onto the infinite dihedral group and the induced amalgam
//! splittings Γ = Γ₁ ∗_X Γ₂.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::is_ghw;
use crate::crystal::{
    crystal_from_affine_with_basis, rational_gcd, AffineMap, CrystalError, CrystalGroup, GroupElement,
    DEFAULT_HOLONOMY_CAP,
};
use crate::exactmath::{kernel_basis, solve_integer_linear, to_rat, IntMatrix, IntVector, RatMatrix, RatVector};

/// Canonical D∞ word: `t^power`, or `x·t^power` when `reflection` is set.
/// Here x acts on Z by u ↦ −u and t by u ↦ u + 1; y = x·t.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DihedralWord {
    pub reflection: bool,
    pub power: BigInt,
}

impl DihedralWord {
    pub fn identity() -> Self {
        Self { reflection: false, power: BigInt::zero() }
    }

    fn affine(&self) -> (i8, BigInt) {
        if self.reflection {
            (-1, -self.power.clone())
        } else {
            (1, self.power.clone())
        }
    }

    fn from_affine(e: i8, c: BigInt) -> Self {
        if e < 0 {
            Self { reflection: true, power: -c }
        } else {
            Self { reflection: false, power: c }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (e1, c1) = self.affine();
        let (e2, c2) = o.affine();
        Self::from_affine(e1 * e2, c1 + if e1 < 0 { -c2 } else { c2 })
    }

    pub fn inverse(&self) -> Self {
        if self.reflection {
            self.clone()
        } else {
            Self { reflection: false, power: -self.power.clone() }
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.reflection && self.power.is_zero()
    }
}

impl std::fmt::Display for DihedralWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.reflection, self.power.is_zero()) {
            (false, true) => write!(f, "1"),
            (false, false) => write!(f, "t^{}", self.power),
            (true, true) => write!(f, "x"),
            (true, false) => write!(f, "x t^{}", self.power),
        }
    }
}

/// Γ → D∞ induced by an integral functional λ with λ·h = ε(h)·λ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralEpi {
    pub functional: IntVector,
    /// ε(h) for every holonomy element, in holonomy index order
    pub character: Vec<i8>,
    /// generator of the translation values λ(t) of ker ε
    pub step: BigRational,
    /// the value λ(t) of a fixed reflection, sent to x
    pub base: BigRational,
    /// images of the generator lifts (hᵢ, a(hᵢ))
    pub generator_images: Vec<DihedralWord>,
    /// images of the lattice basis e₁…eₙ
    pub lattice_images: Vec<DihedralWord>,
    /// false when some ε-eigenlattice has rank > 1, so only basis functionals were tried
    pub family_complete: bool,
}

fn dot(l: &[BigInt], v: &[BigRational]) -> BigRational {
    l.iter().zip(v).map(|(a, b)| BigRational::from_integer(a.clone()) * b).sum()
}

fn row_times(l: &[BigInt], m: &IntMatrix) -> IntVector {
    (0..m.cols()).map(|j| (0..m.rows()).map(|i| &l[i] * &m[(i, j)]).sum()).collect()
}

/// ε(h) per element, or None if λ is not a common ±1 eigenvector.
fn character_of(g: &CrystalGroup, l: &[BigInt]) -> Option<Vec<i8>> {
    let neg: IntVector = l.iter().map(|x| -x).collect();
    g.holonomy()
        .elements()
        .iter()
        .map(|m| {
            let lm = row_times(l, m);
            if lm == l {
                Some(1)
            } else if lm == neg {
                Some(-1)
            } else {
                None
            }
        })
        .collect()
}

/// (step, base) from the values λ(a(h)); base is the first reflection value.
fn step_and_base(g: &CrystalGroup, l: &[BigInt], eps: &[i8]) -> (BigRational, BigRational) {
    let mut vals: Vec<BigRational> = l.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    let mut base: Option<BigRational> = None;
    for (h, &e) in eps.iter().enumerate() {
        let c = dot(l, g.vector(h));
        if e > 0 {
            vals.push(c);
        } else if let Some(b) = &base {
            vals.push(&c - b);
        } else {
            base = Some(c);
        }
    }
    (rational_gcd(&vals), base.expect("some element acts by -1"))
}

impl DihedralEpi {
    fn build(g: &CrystalGroup, functional: IntVector, character: Vec<i8>, family_complete: bool) -> Self {
        let (step, base) = step_and_base(g, &functional, &character);
        let mut epi = Self {
            functional,
            character,
            step,
            base,
            generator_images: Vec::new(),
            lattice_images: Vec::new(),
            family_complete,
        };
        let h = g.holonomy();
        epi.generator_images = g
            .generator_matrices()
            .iter()
            .zip(g.generator_vectors())
            .map(|(m, v)| {
                let idx = h.index_of(m).expect("generator in holonomy");
                epi.image(g, &GroupElement { holonomy: idx, translation: v.clone() })
            })
            .collect();
        let n = g.dim();
        epi.lattice_images = (0..n)
            .map(|j| {
                let e: IntVector = (0..n).map(|i| BigInt::from((i == j) as i64)).collect();
                epi.image(g, &g.translation(&e))
            })
            .collect();
        epi
    }

    /// In the coordinate u = (λ − base/2)/step on the quotient line.
    pub fn image(&self, _g: &CrystalGroup, e: &GroupElement) -> DihedralWord {
        let lt = dot(&self.functional, &e.translation);
        let eps = self.character[e.holonomy];
        let c = if eps > 0 { lt / &self.step } else { (lt - &self.base) / &self.step };
        assert!(c.is_integer(), "image lies in D-infinity");
        DihedralWord::from_affine(eps, c.to_integer())
    }

    fn validate(&self, g: &CrystalGroup) -> Result<(), CrystalError> {
        let bad = |m: &str| Err(CrystalError::InvalidEpi(m.to_string()));
        if self.functional.len() != g.dim() || self.functional.iter().all(Zero::is_zero) {
            return bad("functional has the wrong length or is zero");
        }
        match character_of(g, &self.functional) {
            Some(eps) if eps == self.character => {}
            _ => return bad("functional is not a common eigenvector with the stated character"),
        }
        if !self.character.contains(&-1) {
            return bad("no element maps to a reflection");
        }
        if (self.step.clone(), self.base.clone()) != step_and_base(g, &self.functional, &self.character) {
            return bad("step or base inconsistent with the functional");
        }
        Ok(())
    }
}

/// All D∞ quotients from H-stable rank-one quotients Zⁿ → Z, one per ±λ.
pub fn dihedral_quotients(g: &CrystalGroup) -> Vec<DihedralEpi> {
    let n = g.dim();
    let h = g.holonomy();
    let gens = h.generators();
    let k = gens.len();
    let mut out: Vec<DihedralEpi> = Vec::new();
    for signs in 1u64..1 << k {
        let blocks: Vec<IntMatrix> = gens
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let e = if signs >> i & 1 == 1 { -1 } else { 1 };
                let mut b = m.transpose();
                for d in 0..n {
                    b[(d, d)] -= BigInt::from(e);
                }
                b
            })
            .collect();
        let basis = kernel_basis(&IntMatrix::vstack(&blocks));
        if basis.is_empty() {
            continue;
        }
        let complete = basis.len() == 1;
        for l in basis {
            let l = normalize_sign(l);
            let eps = character_of(g, &l).expect("eigenvector of all generators");
            if out.iter().any(|e| e.functional == l) {
                continue;
            }
            out.push(DihedralEpi::build(g, l, eps, complete));
        }
    }
    out.sort_by(|a, b| b.functional.cmp(&a.functional));
    out
}

fn normalize_sign(l: IntVector) -> IntVector {
    match l.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => l.iter().map(|v| -v).collect(),
        _ => l,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupLabel {
    pub dimension: usize,
    pub holonomy_order: usize,
    pub ghw: bool,
    pub orientable: bool,
}

impl GroupLabel {
    pub fn of(g: &CrystalGroup) -> Self {
        Self {
            dimension: g.dim(),
            holonomy_order: g.holonomy_order(),
            ghw: g.dim() > 0 && is_ghw(g),
            orientable: g.is_orientable(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AmalgamSplit {
    pub gamma1: CrystalGroup,
    pub gamma2: CrystalGroup,
    pub x: CrystalGroup,
    pub labels: [GroupLabel; 3],
    pub index1: BigRational,
    pub index2: BigRational,
}

/// Restrict affine maps of Rⁿ preserving {λ = level} to that hyperplane,
/// in coordinates p + B·w.
fn restrict(
    gens: &[AffineMap],
    l: &[BigInt],
    level: &BigRational,
    b: &RatMatrix,
) -> Result<Vec<AffineMap>, CrystalError> {
    let n = l.len();
    let k = l.iter().position(|x| !x.is_zero()).expect("nonzero functional");
    let mut p = vec![BigRational::zero(); n];
    p[k] = level / BigRational::from_integer(l[k].clone());
    gens.iter()
        .map(|a| {
            let hb = &to_rat(&a.linear) * b;
            let m = crate::crystal::solve_columns(b, &hb);
            let m = crate::exactmath::to_int(&m)
                .ok_or_else(|| CrystalError::InvalidEpi("linear part does not preserve the kernel lattice".into()))?;
            let hp = to_rat(&a.linear).mul_vec(&p);
            let shift: RatVector = (0..n).map(|i| &hp[i] + &a.translation[i] - &p[i]).collect();
            if !dot(l, &shift).is_zero() {
                return Err(CrystalError::InvalidEpi("element does not preserve the hyperplane".into()));
            }
            let tau = b.solve(&shift).expect("shift lies in the hyperplane");
            Ok(AffineMap { linear: m, translation: tau })
        })
        .collect()
}

/// Γ₁ = φ⁻¹⟨x⟩, Γ₂ = φ⁻¹⟨y⟩, X = ker φ, each realized on a level set of λ.
pub fn amalgam_split(g: &CrystalGroup, epi: &DihedralEpi) -> Result<AmalgamSplit, CrystalError> {
    epi.validate(g)?;
    let n = g.dim();
    let l = &epi.functional;
    let lrow = IntMatrix::from_rows(vec![l.clone()]);
    let unit = solve_integer_linear(&lrow, &[BigInt::one()])
        .map_err(|_| CrystalError::InvalidEpi("functional is not primitive".into()))?
        .particular;
    let kb = kernel_basis(&lrow);
    let mut b = RatMatrix::zeros(n, n - 1);
    for (j, v) in kb.iter().enumerate() {
        for i in 0..n {
            b[(i, j)] = BigRational::from_integer(v[i].clone());
        }
    }
    let h = g.holonomy();
    // element (h, a(h) + z) with λ(t) = target, if one exists
    let lift_with_value = |hi: usize, target: &BigRational| -> Option<AffineMap> {
        let diff = target - dot(l, g.vector(hi));
        if !diff.is_integer() {
            return None;
        }
        let m = diff.to_integer();
        let t: RatVector =
            g.vector(hi).iter().zip(&unit).map(|(a, u)| a + BigRational::from_integer(u * &m)).collect();
        Some(AffineMap { linear: h.element(hi).clone(), translation: t })
    };
    let mut x_gens: Vec<AffineMap> = kb
        .iter()
        .map(|v| AffineMap {
            linear: IntMatrix::identity(n),
            translation: v.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
        })
        .collect();
    for hi in 1..h.order() {
        if epi.character[hi] > 0 {
            if let Some(a) = lift_with_value(hi, &BigRational::zero()) {
                x_gens.push(a);
            }
        }
    }
    let reflection = |c: &BigRational| -> Result<AffineMap, CrystalError> {
        (0..h.order())
            .filter(|&hi| epi.character[hi] < 0)
            .find_map(|hi| lift_with_value(hi, c))
            .ok_or_else(|| CrystalError::InvalidEpi("no element maps to the reflection".into()))
    };
    let c1 = epi.base.clone();
    let c2 = &epi.base + &epi.step;
    let two = BigRational::from_integer(2.into());
    let realize = |extra: Option<AffineMap>, level: BigRational, name: &str| {
        let mut gens = x_gens.clone();
        gens.extend(extra);
        let restricted = restrict(&gens, l, &level, &b)?;
        crystal_from_affine_with_basis(name, n - 1, &restricted, DEFAULT_HOLONOMY_CAP)
    };
    let base = g.name();
    let (x, px) = realize(None, BigRational::zero(), &format!("{base}/X"))?;
    let (g1, p1) = realize(Some(reflection(&c1)?), &c1 / &two, &format!("{base}/G1"))?;
    let (g2, p2) = realize(Some(reflection(&c2)?), &c2 / &two, &format!("{base}/G2"))?;
    let covol = |p: &RatMatrix| if n == 1 { BigRational::one() } else { p.det_rat().abs() };
    let index = |gi: &CrystalGroup, pi: &RatMatrix| {
        covol(&px) * BigRational::from_integer(gi.holonomy_order().into())
            / (covol(pi) * BigRational::from_integer(x.holonomy_order().into()))
    };
    let index1 = index(&g1, &p1);
    let index2 = index(&g2, &p2);
    let two_int = BigRational::from_integer(2.into());
    if index1 != two_int || index2 != two_int {
        return Err(CrystalError::InvalidEpi(format!("amalgam indices {index1} and {index2} are not 2")));
    }
    let labels = [GroupLabel::of(&g1), GroupLabel::of(&g2), GroupLabel::of(&x)];
    Ok(AmalgamSplit { gamma1: g1, gamma2: g2, x, labels, index1, index2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{build_crystal, rat_vec};
    use crate::exactmath::int_diag;
    use crate::ghw::ghw_enumerate;

    fn klein() -> CrystalGroup {
        build_crystal("klein", 2, &[int_diag(&[1, -1])], &[rat_vec(&[(1, 2), (0, 1)])], 4).unwrap()
    }

    #[test]
    fn word_arithmetic() {
        let x = DihedralWord { reflection: true, power: 0.into() };
        let t = DihedralWord { reflection: false, power: 1.into() };
        assert!(x.mul(&x).is_identity());
        // x t x = t⁻¹
        assert_eq!(x.mul(&t).mul(&x), t.inverse());
        let y = x.mul(&t);
        assert!(y.mul(&y).is_identity());
    }

    #[test]
    fn hw_has_three_quotients_and_klein_factors() {
        let hw = ghw_enumerate(3, true).unwrap().remove(0);
        let epis = dihedral_quotients(&hw);
        assert_eq!(epis.len(), 3);
        let kf = klein().fingerprint();
        for e in &epis {
            assert!(e.family_complete);
            assert!(e.generator_images.iter().chain(&e.lattice_images).any(|w| w.reflection));
            let s = amalgam_split(&hw, e).unwrap();
            assert_eq!(s.gamma1.fingerprint(), kf);
            assert_eq!(s.gamma2.fingerprint(), kf);
            assert_eq!(s.x.holonomy_order(), 1);
            assert!(s.labels[0].ghw && s.labels[1].ghw);
        }
    }

    #[test]
    fn image_is_a_homomorphism() {
        let hw = ghw_enumerate(3, true).unwrap().remove(0);
        for e in dihedral_quotients(&hw) {
            let elems: Vec<GroupElement> = (0..4)
                .map(|i| {
                    let t: IntVector = vec![BigInt::from(i), BigInt::from(1 - i), BigInt::from(2)];
                    hw.compose(&hw.lift(i as usize), &hw.translation(&t))
                })
                .collect();
            for a in &elems {
                for c in &elems {
                    assert_eq!(e.image(&hw, &hw.compose(a, c)), e.image(&hw, a).mul(&e.image(&hw, c)));
                }
            }
        }
    }

    #[test]
    fn klein_and_torus() {
        let k = klein();
        let epis = dihedral_quotients(&k);
        assert_eq!(epis.len(), 1);
        let s = amalgam_split(&k, &epis[0]).unwrap();
        assert_eq!((s.gamma1.dim(), s.gamma2.dim(), s.x.dim()), (1, 1, 1));
        let t2 = build_crystal("t2", 2, &[], &[], 1).unwrap();
        assert!(dihedral_quotients(&t2).is_empty());
        assert!(matches!(amalgam_split(&t2, &epis[0]), Err(CrystalError::InvalidEpi(_))));
    }
}
