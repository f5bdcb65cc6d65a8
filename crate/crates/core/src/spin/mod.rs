//! Spin structures on orientable flat manifolds: homomorphisms Γ → Spin(n)
//! lifting the holonomy, found by exact Clifford evaluation of a complete
//! presentation of Γ.

mod clifford;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use clifford::{CliffordContext, CliffordElement, CliffordError, PinElement};

use crate::crystal::CrystalGroup;
use crate::exactmath::{to_rat, RatMatrix};
use crate::groups::FiniteMatrixGroup;

pub const MAX_SPIN_DIM: usize = 8;
/// largest n + k for the sign search
pub const MAX_SIGN_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("group is not orientable")]
    NotOrientable,
    #[error("dimension {dim} with {bits} sign bits exceeds the cap")]
    DimensionCap { dim: usize, bits: usize },
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error("relation {0} does not evaluate to a sign")]
    Inconsistent(String),
}

/// S = Σ_h φ(h)ᵀ φ(h).
pub fn invariant_form(h: &FiniteMatrixGroup) -> RatMatrix {
    let n = h.degree();
    h.elements().iter().fold(RatMatrix::zeros(n, n), |acc, m| {
        let r = to_rat(m);
        &acc + &(&r.transpose() * &r)
    })
}

/// One relation of the presentation: the product of generator signs over
/// `mask` must equal `sign`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub label: String,
    pub mask: u64,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinLift {
    /// ±1 per generator: lattice basis t₁…tₙ, then holonomy generator lifts
    pub signs: Vec<i8>,
    /// images of the holonomy generator lifts
    pub generator_images: Vec<PinElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpinReport {
    pub lifts: Vec<SpinLift>,
    pub count: usize,
    pub relations: Vec<RelationCheck>,
    /// rank of H¹(Γ, Z/2) from the abelianization
    pub h1_z2_rank: usize,
    /// count is 0 or 2^rank
    pub cross_check: bool,
}

fn parity_mask(bits: &[BigInt], offset: usize) -> u64 {
    bits.iter()
        .enumerate()
        .filter(|(_, c)| c.is_odd())
        .fold(0u64, |m, (i, _)| m | 1 << (offset + i))
}

pub fn h1_z2_rank(g: &CrystalGroup) -> usize {
    let ab = g.abelianization();
    ab.free_rank + ab.torsion.iter().filter(|d| d.is_even()).count()
}

/// Generators: t₁…tₙ and γⱼ = (hⱼ, a(hⱼ)). Relations: conjugation
/// γⱼ tᵢ γⱼ⁻¹ = t^{hⱼeᵢ} and every product γ_g γ_h = t^{c(g,h)} γ_{gh}, with
/// γ_g defined along a spanning tree of the Cayley graph.
pub fn spin_structures(g: &CrystalGroup) -> Result<SpinReport, SpinError> {
    if !g.is_orientable() {
        return Err(SpinError::NotOrientable);
    }
    let n = g.dim();
    let h = g.holonomy();
    let k = h.generators().len();
    if n > MAX_SPIN_DIM || n + k > MAX_SIGN_BITS {
        return Err(SpinError::DimensionCap { dim: n, bits: n + k });
    }
    let ctx = CliffordContext::new(&invariant_form(h));
    let q = &ctx.q;
    let gen_lifts: Vec<PinElement> = (0..k)
        .map(|j| ctx.lift(&to_rat(h.element(h.generator_index(j)))))
        .collect::<Result<_, _>>()?;

    // spanning tree: value and sign mask of ε(γ_g)
    let mut word: Vec<Option<(PinElement, u64)>> = vec![None; h.order()];
    word[h.identity()] = Some((PinElement::one(), 0));
    let mut queue = std::collections::VecDeque::from([h.identity()]);
    while let Some(x) = queue.pop_front() {
        let (px, mx) = word[x].clone().expect("visited");
        for j in 0..k {
            let gj = h.generator_index(j);
            let y = h.mul(x, gj);
            if word[y].is_none() {
                // γ_y = t^{−c(x, gj)} γ_x γ_j
                let c = g.cocycle_value(x, gj);
                let mask = mx ^ (1 << (n + j)) ^ parity_mask(&c, 0);
                word[y] = Some((px.mul(&gen_lifts[j], q), mask));
                queue.push_back(y);
            }
        }
    }
    let word: Vec<(PinElement, u64)> = word.into_iter().map(|w| w.expect("tree spans H")).collect();

    let mut relations = Vec::new();
    for j in 0..k {
        let m = h.element(h.generator_index(j));
        for i in 0..n {
            let col: Vec<BigInt> =
                (0..n).map(|l| &m[(l, i)] - BigInt::from((l == i) as i64)).collect();
            let mask = parity_mask(&col, 0);
            if mask != 0 {
                relations.push(RelationCheck { label: format!("g{} t{} g{}^-1", j + 1, i + 1, j + 1), mask, sign: 1 });
            }
        }
    }
    for a in 0..h.order() {
        for b in 0..h.order() {
            let ab = h.mul(a, b);
            let lhs = word[a].0.mul(&word[b].0, q);
            let sign = lhs
                .ratio_sign(&word[ab].0, q)
                .ok_or_else(|| SpinError::Inconsistent(format!("product of holonomy elements {a} and {b}")))?;
            let c = g.cocycle_value(a, b);
            let mask = word[a].1 ^ word[b].1 ^ word[ab].1 ^ parity_mask(&c, 0);
            if mask != 0 || sign != 1 {
                relations.push(RelationCheck { label: format!("h{a} h{b} = t^c h{ab}"), mask, sign });
            }
        }
    }
    relations.sort_by(|x, y| (x.mask, x.sign, &x.label).cmp(&(y.mask, y.sign, &y.label)));
    relations.dedup_by(|x, y| x.mask == y.mask && x.sign == y.sign);

    let bits = n + k;
    let mut lifts = Vec::new();
    for assignment in 0u64..1 << bits {
        // bit set means sign −1
        let ok = relations.iter().all(|r| {
            let parity = (assignment & r.mask).count_ones() % 2;
            (if parity == 0 { 1 } else { -1 }) == r.sign
        });
        if ok {
            let signs: Vec<i8> = (0..bits).map(|i| if assignment >> i & 1 == 1 { -1 } else { 1 }).collect();
            let generator_images =
                (0..k).map(|j| if signs[n + j] < 0 { gen_lifts[j].neg() } else { gen_lifts[j].clone() }).collect();
            lifts.push(SpinLift { signs, generator_images });
        }
    }
    let count = lifts.len();
    let rank = h1_z2_rank(g);
    let cross_check = count == 0 || count.to_u64() == Some(1u64 << rank);
    Ok(SpinReport { lifts, count, relations, h1_z2_rank: rank, cross_check })
}

/// Verifies every holonomy element's lift reproduces its matrix.
pub fn check_lifts(g: &CrystalGroup) -> Result<bool, SpinError> {
    let h = g.holonomy();
    let ctx = CliffordContext::new(&invariant_form(h));
    for m in h.elements() {
        let p = ctx.lift(&to_rat(m))?;
        if ctx.twisted_action(&p) != to_rat(m) || p.x.mul(&p.x.reverse(), &ctx.q).as_scalar() != Some(p.scale.clone()) {
            return Ok(false);
        }
    }
    Ok(!ctx.q.iter().any(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{build_crystal, rat_vec};
    use crate::exactmath::{int_diag, int_matrix};
    use crate::ghw::ghw_enumerate;

    #[test]
    fn tori_have_all_sign_choices() {
        for n in 1..=4 {
            let t = build_crystal("t", n, &[], &[], 1).unwrap();
            let r = spin_structures(&t).unwrap();
            assert_eq!(r.count, 1 << n);
            assert!(r.cross_check);
        }
    }

    #[test]
    fn hw_and_klein() {
        let hw = ghw_enumerate(3, true).unwrap().remove(0);
        let r = spin_structures(&hw).unwrap();
        assert_eq!(r.count, 4);
        assert_eq!(r.h1_z2_rank, 2);
        assert!(check_lifts(&hw).unwrap());
        let k = build_crystal("k", 2, &[int_diag(&[1, -1])], &[rat_vec(&[(1, 2), (0, 1)])], 4).unwrap();
        assert_eq!(spin_structures(&k).unwrap_err(), SpinError::NotOrientable);
    }

    #[test]
    fn z3_manifold_is_spin() {
        let r3 = int_matrix(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]]);
        let g = build_crystal("z3", 3, &[r3], &[rat_vec(&[(1, 3), (0, 1), (0, 1)])], 8).unwrap();
        let rep = spin_structures(&g).unwrap();
        assert!(rep.count > 0 && rep.cross_check);
        assert!(check_lifts(&g).unwrap());
    }

    #[test]
    fn invariant_form_of_conjugated_action() {
        let r3 = int_matrix(&[&[0, -1], &[1, -1]]);
        let h = crate::groups::close_group(2, &[r3], 8).unwrap();
        let s = invariant_form(&h);
        for m in h.elements() {
            let r = to_rat(m);
            assert_eq!(&(&r.transpose() * &s) * &r, s);
        }
        assert!(s.is_positive_definite());
    }
}
