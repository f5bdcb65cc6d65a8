//! Generalized Hantzsche–Wendt groups: Bieberbach groups of dimension n with
//! holonomy (Z₂)^{n−1}.
//!
//! Enumeration is scoped to diagonal holonomy representations. Vector
//! systems are taken with entries in {0, 1/2}; for diagonal involutions the
//! cocycle condition then holds automatically and a(gh) = a(g) ⊕ a(h)
//! coordinatewise, so every system is a bit matrix.

mod dihedral;
mod presentation;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::crystal::{build_crystal, CrystalError, CrystalGroup};
use crate::exactmath::{charpoly, int_diag, to_rat, RatVector};

pub use dihedral::{amalgam_split, dihedral_quotients, AmalgamSplit, DihedralEpi, DihedralWord, GroupLabel};
pub use presentation::{
    check_epimorphism, fibonacci_presentation, search_fibonacci_epimorphism, EpiVerdict, Presentation,
    DEFAULT_CERTIFY_BOUND,
};

pub const DEFAULT_GHW_CAP: u64 = 1 << 24;

/// Diagonal (Z₂)^{n−1}: sign vectors with an even number of −1 entries on
/// the coordinates in `support`.
fn diagonal_subgroup(n: usize, support: u32) -> Vec<u32> {
    (0..1u32 << n).filter(|m| (m & support).count_ones().is_multiple_of(2)).collect()
}

/// F₂-basis of a subgroup of (Z₂)ⁿ given as bit masks.
fn f2_basis(elems: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &e in elems {
        let mut x = e;
        for &b in &basis {
            let hb = 31 - b.leading_zeros();
            if x >> hb & 1 == 1 {
                x ^= b;
            }
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // return original-style generators: reduced echelon vectors are fine
    basis
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out.sort();
    out.dedup();
    out
}

fn permute_bits(x: u32, perm: &[usize]) -> u32 {
    perm.iter().enumerate().fold(0, |acc, (i, &j)| acc | ((x >> i & 1) << j))
}

/// Canonical (sign mask, half-translation mask) table of a group, with the group.
type Candidate = (Vec<(u32, u32)>, CrystalGroup);

/// Enumerates one holonomy choice: D = kernel of the character ∏_{i∈S} xᵢ.
fn enumerate_support(n: usize, support: u32, cap: u64) -> Result<Vec<Candidate>, CrystalError> {
    let elems = diagonal_subgroup(n, support);
    let basis = f2_basis(&elems[1..]);
    let r = basis.len();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // each element as XOR of basis vectors: subset masks
    let mut combos: Vec<(u32, u32)> = Vec::with_capacity(1 << r);
    for subset in 0u32..1 << r {
        let sign = (0..r).filter(|&j| subset >> j & 1 == 1).fold(0, |acc, j| acc ^ basis[j]);
        combos.push((subset, sign));
    }
    // coboundaries toggle coordinate i of every generator with −1 there; fix
    // the bit at the first such generator
    let mut free: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        let first = (0..r).find(|&j| basis[j] >> i & 1 == 1);
        for j in 0..r {
            if Some(j) != first {
                free.push((j, i));
            }
        }
    }
    let count = 1u64.checked_shl(free.len() as u32).unwrap_or(u64::MAX);
    if count > cap {
        return Err(CrystalError::CapExceeded { cap: cap as usize });
    }
    let perms: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .filter(|p| permute_bits(support, p) == support)
        .collect();
    let mut seen: std::collections::BTreeMap<Vec<(u32, u32)>, CrystalGroup> = Default::default();
    let mut a = vec![0u32; r];
    for bits in 0..count {
        a.iter_mut().for_each(|x| *x = 0);
        for (k, &(j, i)) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                a[j] |= 1 << i;
            }
        }
        let value = |subset: u32| (0..r).filter(|&j| subset >> j & 1 == 1).fold(0u32, |acc, j| acc ^ a[j]);
        let torsion_free = combos[1..].iter().all(|&(subset, sign)| value(subset) & !sign & full != 0);
        if !torsion_free {
            continue;
        }
        let table: Vec<(u32, u32)> = combos.iter().map(|&(s, sign)| (sign, value(s) & !sign)).collect();
        let canon = perms
            .iter()
            .map(|p| {
                let mut t: Vec<(u32, u32)> =
                    table.iter().map(|&(s, v)| (permute_bits(s, p), permute_bits(v, p))).collect();
                t.sort_unstable();
                t
            })
            .min()
            .expect("identity permutation");
        if seen.contains_key(&canon) {
            continue;
        }
        let half = BigRational::new(1.into(), 2.into());
        let mats: Vec<_> = basis
            .iter()
            .map(|&s| int_diag(&(0..n).map(|i| if s >> i & 1 == 1 { -1 } else { 1 }).collect::<Vec<i64>>()))
            .collect();
        let vecs: Vec<RatVector> = a
            .iter()
            .map(|&v| (0..n).map(|i| if v >> i & 1 == 1 { half.clone() } else { BigRational::zero() }).collect())
            .collect();
        let g = build_crystal("ghw", n, &mats, &vecs, 1 << r)?;
        seen.insert(canon, g);
    }
    Ok(seen.into_iter().collect())
}

/// All GHW groups of dimension n with diagonal holonomy, up to
/// signed-permutation conjugacy and translation adjustment.
/// `orientable = false` returns the non-orientable ones.
pub fn ghw_enumerate(n: usize, orientable: bool) -> Result<Vec<CrystalGroup>, CrystalError> {
    ghw_enumerate_capped(n, orientable, DEFAULT_GHW_CAP)
}

pub fn ghw_enumerate_capped(n: usize, orientable: bool, cap: u64) -> Result<Vec<CrystalGroup>, CrystalError> {
    assert!((1..=31).contains(&n));
    let all = (1u32 << n) - 1;
    let supports: Vec<u32> = if orientable { vec![all] } else { (1..n).map(|k| (1u32 << k) - 1).collect() };
    let mut out = Vec::new();
    for s in supports {
        for (idx, (_, g)) in enumerate_support(n, s, cap)?.into_iter().enumerate() {
            let label = if orientable { "o" } else { "n" };
            let k = s.count_ones();
            out.push(g.with_name(&format!("GHW{n}{label}-s{k}-{}", idx + 1)));
        }
    }
    Ok(out)
}

/// GHW in the structural sense: torsion-free, holonomy (Z₂)^{n−1}.
pub fn is_ghw(g: &CrystalGroup) -> bool {
    let h = g.holonomy();
    h.order() == 1 << (g.dim() - 1) && h.exponent() <= 2 && g.is_torsion_free()
}

/// dim (ΛᵏQⁿ)^H = (1/|H|) Σ_h tr Λᵏ(h), with tr Λᵏ read off the
/// characteristic polynomial.
pub fn exterior_invariant_dims(g: &CrystalGroup) -> Vec<usize> {
    let n = g.dim();
    let h = g.holonomy();
    let mut sums = vec![BigRational::zero(); n + 1];
    for m in h.elements() {
        let cp = charpoly(&to_rat(m));
        for (k, s) in sums.iter_mut().enumerate() {
            let c = cp.coeff(n - k);
            *s += if k % 2 == 0 { c } else { -c };
        }
    }
    let order = BigRational::from_integer(BigInt::from(h.order()));
    sums.into_iter()
        .map(|s| {
            let d = s / &order;
            assert!(d.is_integer());
            d.to_integer().try_into().expect("small dimension")
        })
        .collect()
}

pub fn is_rational_homology_sphere(g: &CrystalGroup) -> bool {
    let dims = exterior_invariant_dims(g);
    let n = g.dim();
    (1..n).all(|k| dims[k] == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::IntMatrix;

    #[test]
    fn small_orientable_counts() {
        assert_eq!(ghw_enumerate(3, true).unwrap().len(), 1);
        assert_eq!(ghw_enumerate(2, true).unwrap().len(), 0);
        assert_eq!(ghw_enumerate(4, true).unwrap().len(), 0);
    }

    #[test]
    fn hw_is_rational_homology_sphere() {
        let hw = &ghw_enumerate(3, true).unwrap()[0];
        assert!(is_ghw(hw));
        assert!(is_rational_homology_sphere(hw));
        assert_eq!(hw.abelianization().torsion, vec![BigInt::from(4), BigInt::from(4)]);
        let t3 = build_crystal("t3", 3, &[], &[], 1).unwrap();
        assert!(!is_rational_homology_sphere(&t3));
        let klein = build_crystal(
            "k",
            2,
            &[IntMatrix::diag(&[1.into(), (-1).into()])],
            &[vec![BigRational::new(1.into(), 2.into()), BigRational::zero()]],
            2,
        )
        .unwrap();
        assert!(!is_rational_homology_sphere(&klein));
    }

    #[test]
    fn non_orientable_small() {
        let k = ghw_enumerate(2, false).unwrap();
        assert_eq!(k.len(), 1);
        assert!(!k[0].is_orientable());
        let three = ghw_enumerate(3, false).unwrap();
        assert!(!three.is_empty());
        assert!(three.iter().all(|g| is_ghw(g) && !g.is_orientable()));
    }
}
