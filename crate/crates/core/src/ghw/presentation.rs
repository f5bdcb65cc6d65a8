//! Finite presentations, cyclically presented Fibonacci groups and
//! certification of epimorphisms onto crystallographic groups.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::crystal::{Abelianization, CrystalError, CrystalGroup, GroupElement};
use crate::exactmath::{lattice_basis, IntMatrix, IntVector};

/// Words are sequences of letters ±(i+1) for generator i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i64>>,
}

fn free_reduce(word: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i64>>) -> Self {
        for w in &relators {
            for &l in w {
                assert!(l != 0 && l.unsigned_abs() as usize <= generators, "letter {l} out of range");
            }
        }
        Self { generators, relators: relators.iter().map(|w| free_reduce(w)).collect() }
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.generators);
        for (r, w) in self.relators.iter().enumerate() {
            for &l in w {
                let i = l.unsigned_abs() as usize - 1;
                m[(r, i)] += BigInt::from(l.signum());
            }
        }
        m
    }

    pub fn abelianization(&self) -> Abelianization {
        Abelianization::from_relations(&self.relation_matrix(), self.generators)
    }

    pub fn format_word(w: &[i64]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|&l| if l > 0 { format!("a{l}") } else { format!("a{}^-1", -l) })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// F(r, n): generators a₁…aₙ, relators aᵢ aᵢ₊₁ ⋯ aᵢ₊ᵣ₋₁ aᵢ₊ᵣ⁻¹, indices mod n.
pub fn fibonacci_presentation(r: usize, n: usize) -> Presentation {
    assert!(r > 0 && n > 0);
    let rels = (0..n)
        .map(|i| {
            let mut w: Vec<i64> = (0..r).map(|k| ((i + k) % n) as i64 + 1).collect();
            w.push(-(((i + r) % n) as i64 + 1));
            w
        })
        .collect();
    Presentation::new(n, rels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum EpiVerdict {
    Epi,
    HomomorphismOnly { diagnostic: String },
    NotHomomorphism { relator: usize },
}

pub const DEFAULT_CERTIFY_BOUND: usize = 4;

fn evaluate(g: &CrystalGroup, images: &[GroupElement], inverses: &[GroupElement], w: &[i64]) -> GroupElement {
    w.iter().fold(g.identity(), |acc, &l| {
        let i = l.unsigned_abs() as usize - 1;
        g.compose(&acc, if l > 0 { &images[i] } else { &inverses[i] })
    })
}

/// Decide whether generator images define a homomorphism, and certify
/// surjectivity using words of length ≤ `bound`.
pub fn check_epimorphism(
    p: &Presentation,
    g: &CrystalGroup,
    images: &[GroupElement],
    bound: usize,
) -> Result<EpiVerdict, CrystalError> {
    if images.len() != p.generators {
        return Err(CrystalError::DimensionMismatch(format!(
            "{} images for {} generators",
            images.len(),
            p.generators
        )));
    }
    if let Some(i) = images.iter().position(|e| !g.contains(e)) {
        return Err(CrystalError::DimensionMismatch(format!("image {i} is not an element of the group")));
    }
    let inverses: Vec<GroupElement> = images.iter().map(|e| g.inverse(e)).collect();
    let id = g.identity();
    for (r, w) in p.relators.iter().enumerate() {
        if evaluate(g, images, &inverses, w) != id {
            return Ok(EpiVerdict::NotHomomorphism { relator: r });
        }
    }
    let h = g.holonomy();
    let hol: Vec<usize> = images.iter().map(|e| e.holonomy).collect();
    let reached = h.subgroup(&hol).len();
    if reached != h.order() {
        return Ok(EpiVerdict::HomomorphismOnly {
            diagnostic: format!("holonomy image has order {reached} of {}", h.order()),
        });
    }
    let letters: Vec<&GroupElement> = images.iter().chain(&inverses).collect();
    let mut ball: Vec<GroupElement> = vec![id.clone()];
    let mut seen: HashSet<GroupElement> = HashSet::from([id]);
    let mut frontier = ball.clone();
    let mut half_ball_len = 1;
    for step in 1..=bound {
        let mut next = Vec::new();
        for x in &frontier {
            for l in &letters {
                let y = g.compose(x, l);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        ball.extend(next.iter().cloned());
        if step <= bound / 2 {
            half_ball_len = ball.len();
        }
        frontier = next;
    }
    let mut translations: Vec<IntVector> = Vec::new();
    let push = |e: &GroupElement, out: &mut Vec<IntVector>| {
        if e.holonomy == 0 && e.translation.iter().any(|x| !x.is_zero()) {
            out.push(e.translation.iter().map(BigRational::to_integer).collect());
        }
    };
    for x in &ball {
        push(x, &mut translations);
        let k = h.element_order(x.holonomy);
        push(&g.power(x, k), &mut translations);
    }
    let small = &ball[..half_ball_len];
    for x in small {
        let xi = g.inverse(x);
        for y in small {
            let c = g.compose(&g.compose(x, y), &g.compose(&xi, &g.inverse(y)));
            push(&c, &mut translations);
        }
    }
    let n = g.dim();
    let basis = lattice_basis(&translations, n);
    let index: BigInt = if basis.len() == n {
        (0..n).map(|i| basis[i][i].clone()).product::<BigInt>()
    } else {
        BigInt::zero()
    };
    if basis.len() == n && index.is_one() {
        Ok(EpiVerdict::Epi)
    } else {
        Ok(EpiVerdict::HomomorphismOnly {
            diagnostic: format!(
                "translations found at bound {bound} span rank {} with index {}",
                basis.len(),
                if index.is_zero() { "infinite".to_string() } else { index.to_string() }
            ),
        })
    }
}

/// Elements (h, t) with t ≡ a(h) and entries of t in {0, ±1/2, ±1}-style
/// shifts: each coordinate takes a(h)ᵢ and a(h)ᵢ − 1, and also 1 when a(h)ᵢ = 0.
fn small_elements(g: &CrystalGroup) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for h in 0..g.holonomy_order() {
        let mut ts: Vec<Vec<BigRational>> = vec![Vec::new()];
        for a in g.vector(h) {
            let mut opts = vec![a.clone(), a - BigRational::one()];
            if a.is_zero() {
                opts.push(BigRational::one());
            }
            ts = ts
                .into_iter()
                .flat_map(|t| {
                    opts.iter().map(move |o| {
                        let mut t2 = t.clone();
                        t2.push(o.clone());
                        t2
                    })
                })
                .collect();
        }
        out.extend(ts.into_iter().map(|t| GroupElement { holonomy: h, translation: t }));
    }
    out
}

/// Bounded search for an epimorphism F(r, m) → Γ: the first r images range
/// over small elements, the rest follow from the relators aᵢ⋯aᵢ₊ᵣ₋₁ = aᵢ₊ᵣ.
/// Stops after `max_candidates` tuples.
pub fn search_fibonacci_epimorphism(
    r: usize,
    m: usize,
    g: &CrystalGroup,
    bound: usize,
    max_candidates: usize,
) -> Result<Option<Vec<GroupElement>>, CrystalError> {
    assert!(r >= 1 && m > r);
    let p = fibonacci_presentation(r, m);
    let pool = small_elements(g);
    let total = pool.len().checked_pow(r as u32).unwrap_or(usize::MAX);
    let mut idx = vec![0usize; r];
    for count in 0..total.min(max_candidates) {
        let mut rem = count;
        for slot in idx.iter_mut().rev() {
            *slot = rem % pool.len();
            rem /= pool.len();
        }
        let mut imgs: Vec<GroupElement> = idx.iter().map(|&i| pool[i].clone()).collect();
        for i in 0..m - r {
            let next = imgs[i..i + r].iter().fold(g.identity(), |acc, e| g.compose(&acc, e));
            imgs.push(next);
        }
        // remaining relators wrap around
        let wraps = (m - r..m).all(|i| {
            let prod = (0..r).fold(g.identity(), |acc, k| g.compose(&acc, &imgs[(i + k) % m]));
            prod == imgs[(i + r) % m]
        });
        if !wraps {
            continue;
        }
        if check_epimorphism(&p, g, &imgs, bound)? == EpiVerdict::Epi {
            return Ok(Some(imgs));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghw::ghw_enumerate;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fibonacci_abelianizations() {
        let f26 = fibonacci_presentation(2, 6);
        assert_eq!((f26.generators, f26.relators.len()), (6, 6));
        assert_eq!(f26.abelianization().torsion, big(&[4, 4]));
        assert_eq!(f26.abelianization().free_rank, 0);
        let f23 = fibonacci_presentation(2, 3);
        assert_eq!(f23.relation_matrix(), crate::exactmath::int_matrix(&[&[1, 1, -1], &[-1, 1, 1], &[1, -1, 1]]));
        assert_eq!(f23.abelianization().torsion, big(&[2, 2]));
        let f11 = fibonacci_presentation(1, 1);
        assert_eq!(f11.relators, vec![Vec::<i64>::new()]);
        assert_eq!(f11.abelianization().free_rank, 1);
    }

    #[test]
    fn epimorphism_verdicts() {
        let hw = ghw_enumerate(3, true).unwrap().remove(0);
        let f26 = fibonacci_presentation(2, 6);
        let ids = vec![hw.identity(); 6];
        assert!(matches!(check_epimorphism(&f26, &hw, &ids, 4).unwrap(), EpiVerdict::HomomorphismOnly { .. }));
        let f23 = fibonacci_presentation(2, 3);
        let t = hw.translation(&big(&[1, 0, 0]));
        let bad = vec![t.clone(), t.clone(), t];
        assert!(matches!(check_epimorphism(&f23, &hw, &bad, 4).unwrap(), EpiVerdict::NotHomomorphism { .. }));
        assert!(check_epimorphism(&f23, &hw, &[hw.identity()], 4).is_err());
    }

    #[test]
    fn f26_maps_onto_hw() {
        let hw = ghw_enumerate(3, true).unwrap().remove(0);
        let imgs = search_fibonacci_epimorphism(2, 6, &hw, 4, 1 << 20).unwrap().expect("epimorphism exists");
        assert_eq!(check_epimorphism(&fibonacci_presentation(2, 6), &hw, &imgs, 4).unwrap(), EpiVerdict::Epi);
    }
}
