//! Decision procedures for integral representations of finite groups:
//! finiteness of the outer automorphism group of a Bieberbach group with
//! this holonomy, its Kähler variant, Q-multiplicity-freeness and the
//! Calabi–Yau parity condition.
//!
//! Two routes are computed: a character checklist and the Wedderburn
//! decomposition of the commutant.

mod blocks;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{to_rat, IntMatrix, RatMatrix};
use crate::groups::{character_table, close_group, CharacterTable, Cyclo, FiniteMatrixGroup, GroupError};

pub use blocks::{
    block_decomposition, center, hilbert_symbol, norm_form, ternary_isotropic, BlockKind, BlockReport, Division,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("no generic center element found")]
    GenericElementFailure,
    #[error("character table does not belong to the representation's group")]
    TableMismatch,
    #[error("character checklist says {checklist}, block decomposition says {blocks}")]
    CrossValidationMismatch { checklist: String, blocks: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A faithful representation, stored as its image group.
#[derive(Clone, Debug)]
pub struct IntegralRep {
    pub group: FiniteMatrixGroup,
    pub labels: Vec<String>,
}

impl IntegralRep {
    pub fn new(gens: &[IntMatrix], cap: usize) -> Result<Self, RepError> {
        let degree = gens.first().map_or(0, IntMatrix::rows);
        Self::with_degree(degree, gens, cap)
    }

    pub fn with_degree(degree: usize, gens: &[IntMatrix], cap: usize) -> Result<Self, RepError> {
        let group = close_group(degree, gens, cap)?;
        let labels = (0..gens.len()).map(|i| format!("g{}", i + 1)).collect();
        Ok(Self { group, labels })
    }

    pub fn from_group(group: FiniteMatrixGroup) -> Self {
        let labels = (0..group.generators().len()).map(|i| format!("g{}", i + 1)).collect();
        Self { group, labels }
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    /// ρ ↦ U ρ U⁻¹.
    pub fn conjugate(&self, u: &IntMatrix) -> Result<Self, RepError> {
        let ui = u.inverse_int().ok_or(GroupError::NotInvertible { index: 0 })?;
        let gens: Vec<IntMatrix> = self.group.generators().iter().map(|g| &(u * g) * &ui).collect();
        let group = close_group(self.degree(), &gens, self.group.order())?;
        Ok(Self { group, labels: self.labels.clone() })
    }

    pub fn direct_sum(&self, other: &IntegralRep) -> Result<Self, RepError> {
        assert_eq!(self.group.generators().len(), other.group.generators().len());
        let gens: Vec<IntMatrix> = self
            .group
            .generators()
            .iter()
            .zip(other.group.generators())
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        let cap = self.group.order() * other.group.order();
        let group = close_group(self.degree() + other.degree(), &gens, cap.max(1))?;
        Ok(Self { group, labels: self.labels.clone() })
    }
}

#[derive(Clone, Debug)]
pub struct CommutantAlgebra {
    pub basis: Vec<RatMatrix>,
}

impl CommutantAlgebra {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Products of basis pairs stay in the span.
    pub fn is_closed(&self) -> bool {
        let n = self.basis[0].rows();
        let k = self.basis.len();
        let mut span = RatMatrix::zeros(n * n, k);
        for (j, b) in self.basis.iter().enumerate() {
            for (i, e) in b.entries().iter().enumerate() {
                span[(i, j)] = e.clone();
            }
        }
        self.basis
            .iter()
            .all(|x| self.basis.iter().all(|y| span.solve((x * y).entries()).is_some()))
    }
}

/// Solution space of X·g = g·X over all generators.
pub fn commutant(rho: &IntegralRep) -> CommutantAlgebra {
    let n = rho.degree();
    let gens = rho.group.generators();
    let mut sys = RatMatrix::zeros((gens.len() * n * n).max(1), n * n);
    for (gi, g) in gens.iter().enumerate() {
        let g = to_rat(g);
        for i in 0..n {
            for j in 0..n {
                let row = gi * n * n + i * n + j;
                for k in 0..n {
                    // (X g)_ij = Σ_k X_ik g_kj, (g X)_ij = Σ_k g_ik X_kj
                    let a = i * n + k;
                    sys[(row, a)] = &sys[(row, a)] + &g[(k, j)];
                    let b = k * n + j;
                    sys[(row, b)] = &sys[(row, b)] - &g[(i, k)];
                }
            }
        }
    }
    let basis = sys
        .nullspace()
        .into_iter()
        .map(|v| RatMatrix::from_vec(n, n, v))
        .collect();
    CommutantAlgebra { basis }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityVector {
    /// a_χ per irreducible character, table order
    pub per_character: Vec<usize>,
    /// common multiplicity per Galois orbit, table orbit order
    pub per_orbit: Vec<usize>,
}

pub fn complex_multiplicities(rho: &IntegralRep, table: &CharacterTable) -> Result<MultiplicityVector, RepError> {
    let g = &rho.group;
    if table.group_order != g.order() || table.class_of.len() != g.order() {
        return Err(RepError::TableMismatch);
    }
    let classes = g.conjugacy_classes();
    if classes != table.classes {
        return Err(RepError::TableMismatch);
    }
    let traces: Vec<Cyclo> = table
        .classes
        .iter()
        .map(|c| table.field.rational(BigRational::from_integer(g.element(c[0]).trace())))
        .collect();
    let mut per_character = Vec::with_capacity(table.values.len());
    for row in &table.values {
        let ip = table.inner_product(&traces, row);
        let a = ip.as_rational().filter(BigRational::is_integer).ok_or(RepError::TableMismatch)?;
        if a.is_negative() {
            return Err(RepError::TableMismatch);
        }
        per_character.push(a.to_integer().to_usize().unwrap());
    }
    let total: usize = per_character.iter().zip(&table.degrees).map(|(a, d)| a * d).sum();
    if total != rho.degree() {
        return Err(RepError::TableMismatch);
    }
    let per_orbit = table
        .galois_orbits
        .iter()
        .map(|orb| {
            let a = per_character[orb[0]];
            debug_assert!(orb.iter().all(|&c| per_character[c] == a));
            a
        })
        .collect();
    Ok(MultiplicityVector { per_character, per_orbit })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Finite,
    Infinite,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tristate {
    Yes,
    No,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChecklistRow {
    pub character: usize,
    pub degree: usize,
    pub multiplicity: usize,
    pub indicator: i32,
    pub orbit_size: usize,
    pub passes: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OutFiniteReport {
    pub verdict: Verdict,
    pub checklist: Vec<ChecklistRow>,
    pub blocks: Vec<BlockReport>,
}

pub const DEFAULT_SEED: u64 = 0;

pub struct Analysis {
    pub table: CharacterTable,
    pub multiplicities: MultiplicityVector,
}

fn analyze(rho: &IntegralRep) -> Result<Analysis, RepError> {
    let table = character_table(&rho.group, crate::groups::DEFAULT_ORDER_CAP)?;
    let multiplicities = complex_multiplicities(rho, &table)?;
    Ok(Analysis { table, multiplicities })
}

fn checklist(an: &Analysis) -> Vec<ChecklistRow> {
    let t = &an.table;
    let a = &an.multiplicities.per_character;
    (0..t.values.len())
        .filter(|&c| a[c] > 0)
        .map(|c| {
            let orbit = &t.galois_orbits[t.orbit_of[c]];
            let ind = t.indicators[c];
            let passes = match ind {
                1 => orbit.len() == 1 && a[c] == 1,
                0 => orbit.len() == 2 && orbit.contains(&t.conjugate_of(c)) && a[c] == 1,
                _ => orbit.len() == 1 && a[c] == 2,
            };
            ChecklistRow {
                character: c,
                degree: t.degrees[c],
                multiplicity: a[c],
                indicator: ind,
                orbit_size: orbit.len(),
                passes,
            }
        })
        .collect()
}

/// Finiteness of Out(Γ) for Bieberbach groups with holonomy ρ.
pub fn out_finite(rho: &IntegralRep) -> Result<OutFiniteReport, RepError> {
    out_finite_seeded(rho, DEFAULT_SEED)
}

pub fn out_finite_seeded(rho: &IntegralRep, seed: u64) -> Result<OutFiniteReport, RepError> {
    let an = analyze(rho)?;
    let rows = checklist(&an);
    let by_checklist = rows.iter().all(|r| r.passes);
    let blocks = block_decomposition(&commutant(rho), seed)?;
    let by_blocks = blocks.iter().all(|b| b.kind.has_finite_units());
    if by_checklist != by_blocks {
        return Err(RepError::CrossValidationMismatch {
            checklist: if by_checklist { "finite" } else { "infinite" }.into(),
            blocks: if by_blocks { "finite" } else { "infinite" }.into(),
        });
    }
    let verdict = if by_checklist { Verdict::Finite } else { Verdict::Infinite };
    Ok(OutFiniteReport { verdict, checklist: rows, blocks })
}

/// Character of the submodule cut out by a central idempotent.
fn block_constituents(rho: &IntegralRep, an: &Analysis, e: &RatMatrix) -> Vec<usize> {
    let t = &an.table;
    let vals: Vec<Cyclo> = t
        .classes
        .iter()
        .map(|c| t.field.rational((&to_rat(rho.group.element(c[0])) * e).trace()))
        .collect();
    (0..t.values.len())
        .filter(|&c| !t.inner_product(&vals, &t.values[c]).is_zero())
        .collect()
}

/// Q-multiplicity-freeness: every commutant block is a division algebra.
pub fn mult_free_check(rho: &IntegralRep) -> Result<Tristate, RepError> {
    mult_free_check_seeded(rho, DEFAULT_SEED)
}

pub fn mult_free_check_seeded(rho: &IntegralRep, seed: u64) -> Result<Tristate, RepError> {
    let blocks = block_decomposition(&commutant(rho), seed)?;
    let mut analysis: Option<Analysis> = None;
    let mut verdict = Tristate::Yes;
    for b in &blocks {
        let d = match b.division {
            Division::Yes => Division::Yes,
            Division::No => Division::No,
            Division::Unknown => {
                if analysis.is_none() {
                    analysis = Some(analyze(rho)?);
                }
                let an = analysis.as_ref().unwrap();
                // indicator −1 forces Schur index 2, which fills a degree-2 block
                let cons = block_constituents(rho, an, &b.idempotent);
                let degree_two = b.dimension == 4 * b.center_degree;
                let quaternionic = cons
                    .iter()
                    .all(|&c| an.table.indicators[c] == -1 && an.multiplicities.per_character[c] == 2);
                if degree_two && quaternionic {
                    Division::Yes
                } else {
                    Division::Unknown
                }
            }
        };
        verdict = match (verdict, d) {
            (_, Division::No) | (Tristate::No, _) => Tristate::No,
            (Tristate::Indeterminate, _) | (_, Division::Unknown) => Tristate::Indeterminate,
            _ => Tristate::Yes,
        };
    }
    if verdict != Tristate::No {
        // every constituent with multiplicity one forces commutative blocks
        let an = match analysis {
            Some(a) => a,
            None => analyze(rho)?,
        };
        if an.multiplicities.per_character.iter().all(|&a| a <= 1) && verdict != Tristate::Yes {
            return Err(RepError::CrossValidationMismatch {
                checklist: "multiplicity free".into(),
                blocks: format!("{verdict:?}"),
            });
        }
    }
    Ok(verdict)
}

/// Finiteness of Out(Γ) for flat Kähler manifolds with holonomy ρ.
pub fn kahler_out_finite(rho: &IntegralRep) -> Result<Verdict, RepError> {
    let an = analyze(rho)?;
    let real_type = (0..an.table.values.len())
        .any(|c| an.multiplicities.per_character[c] > 0 && an.table.indicators[c] == 1);
    if real_type {
        return Ok(Verdict::Infinite);
    }
    Ok(match mult_free_check(rho)? {
        Tristate::Yes => Verdict::Finite,
        Tristate::No => Verdict::Infinite,
        Tristate::Indeterminate => Verdict::Indeterminate,
    })
}

/// Every real-type constituent occurs with even multiplicity.
pub fn calabi_yau_check(rho: &IntegralRep) -> Result<bool, RepError> {
    let an = analyze(rho)?;
    Ok((0..an.table.values.len())
        .all(|c| an.table.indicators[c] != 1 || an.multiplicities.per_character[c] % 2 == 0))
}

/// Integer version of a rational matrix basis element, for display.
pub fn primitive_integer_matrix(m: &RatMatrix) -> IntMatrix {
    let den = m.common_denominator();
    let scaled = m.scale(&BigRational::from_integer(den));
    let ints: Vec<BigInt> = scaled.entries().iter().map(|x| x.to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    IntMatrix::from_vec(m.rows(), m.cols(), ints.into_iter().map(|x| x / &g).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_diag, int_matrix};

    fn rep(gens: &[IntMatrix]) -> IntegralRep {
        IntegralRep::new(gens, 512).unwrap()
    }

    fn trivial2() -> IntegralRep {
        IntegralRep::with_degree(2, &[], 1).unwrap()
    }

    fn klein() -> IntegralRep {
        rep(&[int_diag(&[1, -1])])
    }

    fn rot4() -> IntegralRep {
        rep(&[int_matrix(&[&[0, -1], &[1, 0]])])
    }

    fn z5() -> IntegralRep {
        rep(&[int_matrix(&[&[0, 0, 0, -1], &[1, 0, 0, -1], &[0, 1, 0, -1], &[0, 0, 1, -1]])])
    }

    #[test]
    fn commutant_dimensions() {
        assert_eq!(commutant(&trivial2()).dimension(), 4);
        assert_eq!(commutant(&klein()).dimension(), 2);
        let c = commutant(&rot4());
        assert_eq!(c.dimension(), 2);
        assert!(c.is_closed());
    }

    #[test]
    fn block_examples() {
        let b = block_decomposition(&commutant(&klein()), 0).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.kind == BlockKind::RationalField));
        let b = block_decomposition(&commutant(&rot4()), 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].kind, BlockKind::ImaginaryQuadratic);
        let b = block_decomposition(&commutant(&trivial2()), 0).unwrap();
        assert_eq!((b.len(), b[0].dimension, b[0].kind), (1, 4, BlockKind::InfiniteUnits));
    }

    #[test]
    fn idempotents_sum_to_identity() {
        for r in [klein(), rot4(), z5(), trivial2()] {
            let b = block_decomposition(&commutant(&r), 3).unwrap();
            let n = r.degree();
            let sum = b.iter().fold(RatMatrix::zeros(n, n), |acc, x| &acc + &x.idempotent);
            assert!(sum.is_identity());
            let dims: usize = b.iter().map(|x| x.dimension).sum();
            assert_eq!(dims, commutant(&r).dimension());
        }
    }

    #[test]
    fn multiplicity_examples() {
        let r = klein();
        let t = character_table(&r.group, 512).unwrap();
        assert_eq!(complex_multiplicities(&r, &t).unwrap().per_character, vec![1, 1]);
        let r = z5();
        let t = character_table(&r.group, 512).unwrap();
        let m = complex_multiplicities(&r, &t).unwrap();
        assert_eq!(m.per_character[0], 0);
        assert_eq!(m.per_character.iter().sum::<usize>(), 4);
    }

    #[test]
    fn predicates() {
        assert_eq!(out_finite(&trivial2()).unwrap().verdict, Verdict::Infinite);
        assert_eq!(out_finite(&klein()).unwrap().verdict, Verdict::Finite);
        assert_eq!(out_finite(&z5()).unwrap().verdict, Verdict::Infinite);
        assert_eq!(kahler_out_finite(&rot4()).unwrap(), Verdict::Finite);
        assert_eq!(kahler_out_finite(&klein()).unwrap(), Verdict::Infinite);
        assert_eq!(kahler_out_finite(&z5()).unwrap(), Verdict::Finite);
        assert_eq!(mult_free_check(&klein()).unwrap(), Tristate::Yes);
        assert_eq!(mult_free_check(&trivial2()).unwrap(), Tristate::No);
        assert_eq!(mult_free_check(&z5()).unwrap(), Tristate::Yes);
    }

    #[test]
    fn calabi_yau_examples() {
        let torus6 = IntegralRep::with_degree(6, &[], 1).unwrap();
        assert!(calabi_yau_check(&torus6).unwrap());
        let mixed = rep(&[int_diag(&[1, 1, 1, -1, -1, -1])]);
        assert!(!calabi_yau_check(&mixed).unwrap());
        let hw2 = rep(&[int_diag(&[1, -1, -1, 1, -1, -1]), int_diag(&[-1, 1, -1, -1, 1, -1])]);
        assert!(calabi_yau_check(&hw2).unwrap());
    }

    #[test]
    fn quaternion_group_is_definite() {
        // Q8 acting on Z⁴ = Hurwitz-free quaternion lattice by left multiplication
        let i = int_matrix(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let j = int_matrix(&[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
        let r = rep(&[i, j]);
        let rep_out = out_finite(&r).unwrap();
        assert_eq!(rep_out.verdict, Verdict::Finite);
        assert_eq!(rep_out.blocks[0].kind, BlockKind::DefiniteQuaternion);
        assert_eq!(mult_free_check(&r).unwrap(), Tristate::Yes);
    }
}
