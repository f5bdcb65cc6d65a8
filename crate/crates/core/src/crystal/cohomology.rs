//! Cohomology of a finite matrix group with coefficients in its lattice.
//!
//! Degree 1 and 2 are computed from the consistency relations of the
//! breadth-first extension over the generators: a vector system on the
//! generators extends to a crossed homomorphism H → Qⁿ/Zⁿ exactly when the
//! relation matrix R maps it into Zᵐ, and H²(H, Zⁿ) ≅ H¹(H, Qⁿ/Zⁿ) is the
//! torsion of coker R. The normalized bar complex gives an independent
//! computation for small groups.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{build_crystal, CrystalError, CrystalGroup, GroupElement};
use crate::exactmath::{kernel_basis, reduce_mod_one, smith, smith_divisors, to_rat, IntMatrix, IntVector, RatMatrix, RatVector};
use crate::groups::{close_group, FiniteMatrixGroup};

/// A finite group acting on Zⁿ. The group is faithful through its own
/// matrices; `action[x]` is the module matrix of element x.
#[derive(Clone, Debug)]
pub struct GroupModule {
    pub group: FiniteMatrixGroup,
    pub action: Vec<IntMatrix>,
}

impl GroupModule {
    /// The natural module of a matrix group.
    pub fn natural(h: &FiniteMatrixGroup) -> Self {
        Self { group: h.clone(), action: h.elements().to_vec() }
    }

    /// H acting through `module_gens[i]` for its i-th generator. Fails with
    /// `NotFaithful` wording if the assignment is not a homomorphism.
    pub fn new(h: &FiniteMatrixGroup, module_gens: &[IntMatrix]) -> Result<Self, CrystalError> {
        let d = h.degree();
        let m = module_gens.first().map_or(0, IntMatrix::rows);
        if module_gens.len() != h.generators().len() {
            return Err(CrystalError::DimensionMismatch("one module matrix per generator".into()));
        }
        let joint: Vec<IntMatrix> = h.generators().iter().zip(module_gens).map(|(a, b)| a.direct_sum(b)).collect();
        let g = close_group(d + m, &joint, h.order())
            .map_err(|_| CrystalError::NotFaithful("module matrices do not define an action".into()))?;
        if g.order() != h.order() {
            return Err(CrystalError::NotFaithful("module matrices do not define an action".into()));
        }
        let block = |x: &IntMatrix, off: usize, size: usize| {
            let mut b = IntMatrix::zeros(size, size);
            for i in 0..size {
                for j in 0..size {
                    b[(i, j)] = x[(off + i, off + j)].clone();
                }
            }
            b
        };
        let action = g.elements().iter().map(|x| block(x, d, m)).collect();
        Ok(Self { group: g, action })
    }

    pub fn dim(&self) -> usize {
        self.action.first().map_or(0, IntMatrix::rows)
    }
}

/// A cochain on the full group: degree 1 is indexed by element, degree 2 by
/// `g * |H| + h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cochain {
    pub degree: usize,
    pub order: usize,
    pub values: Vec<IntVector>,
}

impl Cochain {
    pub fn at2(&self, g: usize, h: usize) -> &IntVector {
        &self.values[g * self.order + h]
    }
}

/// Coordinates of one class with respect to the cyclic decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyClass {
    pub divisors: Vec<BigInt>,
    pub coords: Vec<BigInt>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyResult {
    pub degree: usize,
    /// elementary divisors > 1 (a zero would mark a free summand)
    pub divisors: Vec<BigInt>,
    /// one cocycle per cyclic factor
    pub representatives: Vec<Cochain>,
    #[serde(skip)]
    data: ClassData,
}

#[derive(Clone, Debug)]
enum ClassData {
    /// vector systems: coords = (rows · A) mod d
    Two { class_rows: IntMatrix, generators: Vec<RatVector>, dim: usize, width: usize },
    /// integral crossed homomorphisms: solve in the cocycle lattice first
    One { cocycles: Vec<IntVector>, class_rows: IntMatrix },
}

impl CohomologyResult {
    /// |H^k|.
    pub fn order(&self) -> BigInt {
        self.divisors.iter().fold(BigInt::one(), |a, d| a * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    fn reduce(&self, y: Vec<BigInt>) -> CohomologyClass {
        let coords = y.iter().zip(&self.divisors).map(|(v, d)| v.mod_floor(d)).collect();
        CohomologyClass { divisors: self.divisors.clone(), coords }
    }

    /// Class of a degree-2 datum given by generator translation vectors.
    pub fn class_of_vector_system(&self, vectors: &[RatVector]) -> CohomologyClass {
        let ClassData::Two { class_rows, .. } = &self.data else {
            panic!("class_of_vector_system needs a degree-2 result")
        };
        let flat: RatVector = vectors.iter().flatten().cloned().collect();
        let y = to_rat(class_rows)
            .mul_vec(&flat)
            .into_iter()
            .map(|v| {
                assert!(v.is_integer(), "vector system is not consistent");
                v.to_integer()
            })
            .collect();
        self.reduce(y)
    }

    /// Class of an integral crossed homomorphism given on the generators.
    pub fn class_of_crossed_hom(&self, values: &[IntVector]) -> CohomologyClass {
        let ClassData::One { cocycles, class_rows } = &self.data else {
            panic!("class_of_crossed_hom needs a degree-1 result")
        };
        let flat: IntVector = values.iter().flatten().cloned().collect();
        let c = coords_in_basis(cocycles, &[flat]).pop().expect("one target");
        self.reduce(class_rows.mul_vec(&c))
    }

    /// Generator translation vectors (reduced into [0,1)ⁿ) for given
    /// coordinates, degree 2 only.
    pub fn vector_system(&self, coords: &[BigInt]) -> Vec<RatVector> {
        let ClassData::Two { generators, dim, width, .. } = &self.data else {
            panic!("vector_system needs a degree-2 result")
        };
        let mut flat = vec![BigRational::zero(); *width];
        for (c, g) in coords.iter().zip(generators) {
            let c = BigRational::from_integer(c.clone());
            for (f, x) in flat.iter_mut().zip(g) {
                *f += &c * x;
            }
        }
        flat.chunks(*dim).map(reduce_mod_one).collect()
    }

    /// All coordinate tuples, refusing more than `cap` classes.
    pub fn all_classes(&self, cap: usize) -> Result<Vec<Vec<BigInt>>, CrystalError> {
        if self.order() > BigInt::from(cap) {
            return Err(CrystalError::CapExceeded { cap });
        }
        let mut out = vec![Vec::new()];
        for d in &self.divisors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut i = BigInt::zero();
                while &i < d {
                    let mut t: Vec<BigInt> = prefix.clone();
                    t.push(i.clone());
                    next.push(t);
                    i += 1;
                }
            }
            out = next;
        }
        Ok(out)
    }
}

/// Consistency relations of the generator data, and the linear expression
/// of every element's value in terms of the generator values.
pub(crate) struct Relations {
    pub matrix: IntMatrix,
    pub expressions: Vec<IntMatrix>,
}

pub(crate) fn relations(module: &GroupModule) -> Relations {
    let h = &module.group;
    let n = module.dim();
    let r = h.generators().len();
    let width = r * n;
    let order = h.order();
    let gidx: Vec<usize> = (0..r).map(|i| h.generator_index(i)).collect();
    let mut expr: Vec<Option<IntMatrix>> = vec![None; order];
    expr[0] = Some(IntMatrix::zeros(n, width));
    let mut rows: Vec<IntVector> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut done = vec![false; order];
    while let Some(x) = queue.pop_front() {
        if done[x] {
            continue;
        }
        done[x] = true;
        let cx = expr[x].clone().unwrap();
        let mx = &module.action[x];
        for (gi, &g) in gidx.iter().enumerate() {
            let mut term = cx.clone();
            for i in 0..n {
                for j in 0..n {
                    term[(i, gi * n + j)] += &mx[(i, j)];
                }
            }
            let y = h.mul(x, g);
            match &expr[y] {
                None => {
                    expr[y] = Some(term);
                    queue.push_back(y);
                }
                Some(cy) => {
                    let diff = &term - cy;
                    rows.extend(diff.to_rows().into_iter().filter(|row| row.iter().any(|v| !v.is_zero())));
                }
            }
        }
    }
    let matrix = if rows.is_empty() { IntMatrix::zeros(0, width) } else { IntMatrix::from_rows(rows) };
    Relations { matrix, expressions: expr.into_iter().map(Option::unwrap).collect() }
}

/// Coordinates of each target in the lattice spanned by the (independent,
/// saturated) basis rows.
fn coords_in_basis(basis: &[IntVector], targets: &[IntVector]) -> Vec<IntVector> {
    let s = basis.len();
    if s == 0 {
        return targets.iter().map(|_| Vec::new()).collect();
    }
    let dim = basis[0].len();
    let mut aug = RatMatrix::zeros(dim, s + targets.len());
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            aug[(i, j)] = BigRational::from_integer(b[i].clone());
        }
    }
    for (j, t) in targets.iter().enumerate() {
        for i in 0..dim {
            aug[(i, s + j)] = BigRational::from_integer(t[i].clone());
        }
    }
    let (r, pivots) = aug.rref();
    debug_assert!(pivots.len() >= s && pivots[..s].iter().enumerate().all(|(i, &p)| i == p));
    (0..targets.len())
        .map(|j| {
            (0..s)
                .map(|i| {
                    let v = &r[(i, s + j)];
                    assert!(v.is_integer(), "target outside the lattice");
                    v.to_integer()
                })
                .collect()
        })
        .collect()
}

/// Quotient Zˢ / image(columns): nontrivial divisors, class-coordinate rows
/// and generator coordinates.
fn quotient(s: usize, cols: &[IntVector]) -> (Vec<BigInt>, IntMatrix, Vec<IntVector>) {
    if s == 0 {
        return (Vec::new(), IntMatrix::zeros(0, 0), Vec::new());
    }
    let c = if cols.is_empty() {
        IntMatrix::zeros(s, 1)
    } else {
        IntMatrix::from_rows(cols.to_vec()).transpose()
    };
    let sm = smith(&c);
    let divs = sm.divisors();
    let uinv = sm.u.inverse_int().expect("unimodular");
    let mut out_divs = Vec::new();
    let mut rows = Vec::new();
    let mut gens = Vec::new();
    for i in 0..s {
        let d = divs.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_one() {
            continue;
        }
        out_divs.push(d);
        rows.push(sm.u.row(i).to_vec());
        gens.push(uinv.col(i));
    }
    let rows = if rows.is_empty() { IntMatrix::zeros(0, s) } else { IntMatrix::from_rows(rows) };
    (out_divs, rows, gens)
}

/// H^k(H, Zⁿ) for k ∈ {1, 2}, with the action given by the group's matrices.
pub fn cohomology(h: &FiniteMatrixGroup, k: usize) -> Result<CohomologyResult, CrystalError> {
    cohomology_module(&GroupModule::natural(h), k)
}

/// H^k(G, M) for an arbitrary module M of the finite group.
pub fn cohomology_module(module: &GroupModule, k: usize) -> Result<CohomologyResult, CrystalError> {
    let h = &module.group;
    let n = module.dim();
    let order = h.order();
    let rel = relations(module);
    let r = h.generators().len();
    match k {
        1 => {
            let cocycles = if r == 0 { Vec::new() } else { kernel_basis(&rel.matrix) };
            let boundary = if r == 0 {
                Vec::new()
            } else {
                let m = IntMatrix::vstack(
                    &(0..r)
                        .map(|i| &module.action[h.generator_index(i)] - &IntMatrix::identity(n))
                        .collect::<Vec<_>>(),
                );
                let cols: Vec<IntVector> = (0..n).map(|j| m.col(j)).collect();
                coords_in_basis(&cocycles, &cols)
            };
            let (divisors, class_rows, gens) = quotient(cocycles.len(), &boundary);
            let representatives = gens
                .iter()
                .map(|c| {
                    let flat: IntVector = (0..r * n)
                        .map(|j| cocycles.iter().zip(c).map(|(z, ci)| &z[j] * ci).sum())
                        .collect();
                    Cochain {
                        degree: 1,
                        order,
                        values: rel.expressions.iter().map(|e| e.mul_vec(&flat)).collect(),
                    }
                })
                .collect();
            Ok(CohomologyResult { degree: 1, divisors, representatives, data: ClassData::One { cocycles, class_rows } })
        }
        2 => {
            let width = r * n;
            let (divisors, class_rows, generators) = if rel.matrix.rows() == 0 {
                (Vec::new(), IntMatrix::zeros(0, width), Vec::new())
            } else {
                let sm = smith(&rel.matrix);
                let divs = sm.divisors();
                let mut out_divs = Vec::new();
                let mut rows = Vec::new();
                let mut gens = Vec::new();
                for (i, d) in divs.iter().enumerate() {
                    if d.is_zero() || d.is_one() {
                        continue;
                    }
                    out_divs.push(d.clone());
                    let ur: IntVector = (0..width)
                        .map(|j| (0..rel.matrix.rows()).map(|l| &sm.u[(i, l)] * &rel.matrix[(l, j)]).sum())
                        .collect();
                    rows.push(ur);
                    gens.push(
                        sm.v.col(i)
                            .into_iter()
                            .map(|x| BigRational::new(x, d.clone()))
                            .collect::<RatVector>(),
                    );
                }
                let rows = if rows.is_empty() { IntMatrix::zeros(0, width) } else { IntMatrix::from_rows(rows) };
                (out_divs, rows, gens)
            };
            let representatives = generators
                .iter()
                .map(|a| {
                    let full: Vec<RatVector> = rel.expressions.iter().map(|e| to_rat(e).mul_vec(a)).collect();
                    coboundary_of_system(module, &full)
                })
                .collect();
            Ok(CohomologyResult {
                degree: 2,
                divisors,
                representatives,
                data: ClassData::Two { class_rows, generators, dim: n, width },
            })
        }
        _ => Err(CrystalError::DimensionMismatch(format!("cohomology degree {k} is not supported"))),
    }
}

/// f(g,h) = a(g) + g·a(h) − a(gh) for a vector system given on all of H.
fn coboundary_of_system(module: &GroupModule, a: &[RatVector]) -> Cochain {
    let h = &module.group;
    let order = h.order();
    let mut values = Vec::with_capacity(order * order);
    for g in 0..order {
        let mg = to_rat(&module.action[g]);
        for x in 0..order {
            let gx = h.mul(g, x);
            let moved = mg.mul_vec(&a[x]);
            values.push(
                a[g].iter()
                    .zip(&moved)
                    .zip(&a[gx])
                    .map(|((p, q), r)| {
                        let v = p + q - r;
                        assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect(),
            );
        }
    }
    Cochain { degree: 2, order, values }
}

/// The 2-cocycle of Γ's stored vector system.
pub fn cocycle_of(g: &CrystalGroup) -> Cochain {
    coboundary_of_system(&GroupModule::natural(g.holonomy()), g.vectors())
}

/// Vector system a(g) = (1/|H|) Σ_k f(g,k), which satisfies δa = f.
pub fn cocycle_to_vector_system(h: &FiniteMatrixGroup, f: &Cochain) -> Vec<RatVector> {
    let order = h.order();
    let n = h.degree();
    let scale = BigRational::new(BigInt::one(), BigInt::from(order));
    (0..order)
        .map(|g| {
            (0..n)
                .map(|i| {
                    let s: BigInt = (0..order).map(|k| f.at2(g, k)[i].clone()).sum();
                    BigRational::from_integer(s) * &scale
                })
                .collect()
        })
        .collect()
}

/// Restriction of the class of a 2-cocycle on H to the subgroup formed by
/// `members` (element indices of H).
pub fn restriction(h: &FiniteMatrixGroup, f: &Cochain, members: &[usize]) -> Result<CohomologyClass, CrystalError> {
    let a = cocycle_to_vector_system(h, f);
    let mut gens: Vec<usize> = Vec::new();
    let mut span = h.subgroup(&[]);
    for &m in members {
        if !span.contains(&m) {
            gens.push(m);
            span = h.subgroup(&gens);
        }
    }
    let mats: Vec<IntMatrix> = gens.iter().map(|&g| h.element(g).clone()).collect();
    let p = close_group(h.degree(), &mats, members.len().max(1))?;
    let coh = cohomology(&p, 2)?;
    let vecs: Vec<RatVector> = gens.iter().map(|&g| a[g].clone()).collect();
    Ok(coh.class_of_vector_system(&vecs))
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsionFreeClasses {
    pub divisors: Vec<BigInt>,
    pub groups: Vec<(Vec<BigInt>, CrystalGroup)>,
    /// classes whose extension has torsion, with a witnessing element
    pub rejected: Vec<(Vec<BigInt>, GroupElement)>,
}

/// Every class of H²(H, Zⁿ) whose extension is torsion-free.
pub fn torsion_free_classes(h: &FiniteMatrixGroup, cap: usize) -> Result<TorsionFreeClasses, CrystalError> {
    let coh = cohomology(h, 2)?;
    let mut groups = Vec::new();
    let mut rejected = Vec::new();
    for coords in coh.all_classes(cap)? {
        let vecs = coh.vector_system(&coords);
        let label: Vec<String> = coords.iter().map(ToString::to_string).collect();
        let g = build_crystal(&format!("class[{}]", label.join(",")), h.degree(), h.generators(), &vecs, h.order())?;
        match g.torsion_element() {
            None => groups.push((coords, g)),
            Some(t) => rejected.push((coords, t)),
        }
    }
    Ok(TorsionFreeClasses { divisors: coh.divisors.clone(), groups, rejected })
}

/// Nontrivial divisors of H^k from the normalized bar complex, with a zero
/// for each free summand. Refuses cochain spaces above `max_dim`.
pub fn bar_cohomology(module: &GroupModule, k: usize, max_dim: usize) -> Result<Vec<BigInt>, CrystalError> {
    let h = module;
    let n = module.dim();
    let m = module.group.order() - 1;
    let size = |deg: usize| m.pow(deg as u32) * n;
    if size(k + 1) > max_dim {
        return Err(CrystalError::CapExceeded { cap: max_dim });
    }
    let dk = bar_coboundary(h, k);
    let cyc = kernel_basis(&dk);
    let boundary: Vec<IntVector> = if k == 0 {
        Vec::new()
    } else {
        let prev = bar_coboundary(h, k - 1);
        (0..prev.cols()).map(|j| prev.col(j)).collect()
    };
    let coords = coords_in_basis(&cyc, &boundary);
    let s = cyc.len();
    if s == 0 {
        return Ok(Vec::new());
    }
    let c = if coords.is_empty() { IntMatrix::zeros(s, 1) } else { IntMatrix::from_rows(coords).transpose() };
    let divs = smith_divisors(&c);
    let mut out: Vec<BigInt> = (0..s)
        .map(|i| divs.get(i).cloned().unwrap_or_else(BigInt::zero))
        .filter(|d| !d.is_one())
        .collect();
    out.sort_by_key(|a| (a.is_zero(), a.abs()));
    Ok(out)
}

/// δ: C^k → C^{k+1} on normalized cochains (arguments range over
/// non-identity elements).
fn bar_coboundary(module: &GroupModule, k: usize) -> IntMatrix {
    let h = &module.group;
    let n = module.dim();
    let m = h.order() - 1;
    let tuples = |deg: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..deg {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (1..=m).map(move |g| {
                        let mut t2 = t.clone();
                        t2.push(g);
                        t2
                    })
                })
                .collect();
        }
        out
    };
    let index = |t: &[usize]| -> usize { t.iter().fold(0, |acc, &g| acc * m + (g - 1)) };
    let src = tuples(k);
    let dst = tuples(k + 1);
    let mut d = IntMatrix::zeros(dst.len() * n, src.len() * n);
    let sign = |i: usize| if i.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    for (row, t) in dst.iter().enumerate() {
        let base = row * n;
        // g1 · f(g2..)
        let col = index(&t[1..]) * n;
        let g1 = &module.action[t[0]];
        for i in 0..n {
            for j in 0..n {
                d[(base + i, col + j)] += &g1[(i, j)];
            }
        }
        for i in 1..=k {
            let prod = h.mul(t[i - 1], t[i]);
            if prod == 0 {
                continue;
            }
            let mut s: Vec<usize> = t[..i - 1].to_vec();
            s.push(prod);
            s.extend_from_slice(&t[i + 1..]);
            let col = index(&s) * n;
            for j in 0..n {
                d[(base + j, col + j)] += sign(i);
            }
        }
        let col = index(&t[..k]) * n;
        for j in 0..n {
            d[(base + j, col + j)] += sign(k + 1);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_diag, int_matrix};

    fn z2(m: IntMatrix) -> FiniteMatrixGroup {
        close_group(m.rows(), &[m], 8).unwrap()
    }

    fn v4_hw() -> FiniteMatrixGroup {
        close_group(3, &[int_diag(&[1, -1, -1]), int_diag(&[-1, 1, -1])], 8).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclic_examples() {
        assert_eq!(cohomology(&z2(int_diag(&[1, -1])), 1).unwrap().divisors, big(&[2]));
        let z2 = z2(int_diag(&[-1]));
        let trivial = GroupModule::new(&z2, &[int_diag(&[1])]).unwrap();
        assert_eq!(cohomology_module(&trivial, 2).unwrap().divisors, big(&[2]));
        assert!(cohomology_module(&trivial, 1).unwrap().is_trivial());
        assert!(cohomology(&z2, 2).unwrap().is_trivial());
        assert_eq!(bar_cohomology(&trivial, 2, 100).unwrap(), big(&[2]));
        assert!(GroupModule::new(&z2, &[int_matrix(&[&[0, -1], &[1, 0]])]).is_err());
    }

    #[test]
    fn bar_complex_agrees() {
        let groups = vec![
            z2(int_diag(&[1, -1])),
            z2(int_diag(&[1])),
            z2(int_diag(&[-1])),
            v4_hw(),
            close_group(2, &[int_matrix(&[&[0, -1], &[1, 0]])], 8).unwrap(),
            close_group(2, &[int_matrix(&[&[0, 1], &[1, 0]])], 8).unwrap(),
        ];
        for g in &groups {
            for k in 1..=2 {
                let fast = cohomology(g, k).unwrap().divisors;
                let bar = bar_cohomology(&GroupModule::natural(g), k, 4000).unwrap();
                assert_eq!(fast, bar, "degree {k}, order {}", g.order());
            }
        }
    }

    #[test]
    fn representatives_are_cocycles() {
        let h = v4_hw();
        let res = cohomology(&h, 2).unwrap();
        let d = bar_coboundary(&GroupModule::natural(&h), 2);
        for f in &res.representatives {
            // normalized coordinates of f
            let flat: IntVector = (1..4)
                .flat_map(|g| (1..4).map(move |x| (g, x)))
                .flat_map(|(g, x)| f.at2(g, x).clone())
                .collect();
            assert!(d.mul_vec(&flat).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hw_class_restricts_nontrivially() {
        let h = v4_hw();
        let tf = torsion_free_classes(&h, 1024).unwrap();
        assert!(!tf.groups.is_empty());
        for (_, g) in &tf.groups {
            assert!(g.is_torsion_free_by_restriction());
            let f = cocycle_of(g);
            for sub in h.prime_order_elements() {
                assert!(!restriction(&h, &f, &sub.members).unwrap().is_zero());
            }
        }
        for (_, t) in &tf.rejected {
            assert!(t.holonomy != 0);
        }
    }

    #[test]
    fn klein_classes() {
        let h = z2(int_diag(&[1, -1]));
        let tf = torsion_free_classes(&h, 16).unwrap();
        assert_eq!(tf.groups.len(), 1);
        assert_eq!(tf.rejected.len(), 1);
        let sign = torsion_free_classes(&z2(int_diag(&[-1])), 16).unwrap();
        assert!(sign.groups.is_empty() && sign.divisors.is_empty());
    }

    #[test]
    fn zero_class_restricts_to_zero() {
        let h = z2(int_diag(&[1, -1]));
        let f = Cochain { degree: 2, order: 2, values: vec![big(&[0, 0]); 4] };
        assert!(restriction(&h, &f, &[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn vector_system_round_trip() {
        let h = v4_hw();
        let res = cohomology(&h, 2).unwrap();
        for coords in res.all_classes(64).unwrap() {
            let vecs = res.vector_system(&coords);
            assert_eq!(res.class_of_vector_system(&vecs).coords, coords);
        }
    }

    #[test]
    fn crossed_hom_classes() {
        let h = z2(int_diag(&[1, -1]));
        let res = cohomology(&h, 1).unwrap();
        assert_eq!(res.class_of_crossed_hom(&[big(&[0, 1])]).coords, big(&[1]));
        assert!(res.class_of_crossed_hom(&[big(&[0, 2])]).is_zero());
    }
}
