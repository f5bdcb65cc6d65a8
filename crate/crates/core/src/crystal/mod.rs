//! Crystallographic groups given by a holonomy group H ⊂ GL(n, Z) and a
//! vector system a: H → Qⁿ/Zⁿ.
//!
//! An element of Γ is a pair `(h, t)` acting on Rⁿ by `x ↦ h x + t`, with
//! `t ≡ a(h) (mod Zⁿ)`.

pub mod cohomology;
pub mod search;

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactmath::{
    is_integral, kernel_basis, reduce_mod_one, smith_divisors, solve_integer_linear, to_rat,
    IntMatrix, IntVector, RatMatrix, RatVector,
};
use crate::groups::{close_group, FiniteMatrixGroup, GroupError};

pub use cohomology::{
    cocycle_to_vector_system, cohomology, restriction, torsion_free_classes, CohomologyClass,
    CohomologyResult,
};
pub use search::{minimal_dimension_search, CatalogLattice, LatticeCatalog, SearchConstraint, SearchResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrystalError {
    #[error("vector system violates the cocycle condition at element {element} times generator {generator}")]
    InconsistentVectorSystem { element: usize, generator: usize },
    #[error("holonomy closure exceeded the order cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("holonomy representation is not faithful: {0}")]
    NotFaithful(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator {index} is not invertible over Z")]
    NotInvertible { index: usize },
    #[error("group has trivial center (first Betti number is zero)")]
    NoCenter,
    #[error("invalid epimorphism: {0}")]
    InvalidEpi(String),
    #[error("no flat manifold found up to dimension {max_dim}")]
    NotFound { max_dim: usize },
}

impl From<GroupError> for CrystalError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { cap } => CrystalError::CapExceeded { cap },
            GroupError::NotInvertible { index } => CrystalError::NotInvertible { index },
            GroupError::DimensionMismatch { index, degree } => {
                CrystalError::DimensionMismatch(format!("generator {index} is not {degree}x{degree}"))
            }
        }
    }
}

/// An affine element `x ↦ φ(h) x + t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupElement {
    pub holonomy: usize,
    pub translation: RatVector,
}

#[derive(Clone, Debug)]
pub struct CrystalGroup {
    name: String,
    dim: usize,
    holonomy: FiniteMatrixGroup,
    /// a(h) reduced into [0,1)ⁿ, indexed like the holonomy elements
    vectors: Vec<RatVector>,
    generator_vectors: Vec<RatVector>,
}

pub const DEFAULT_HOLONOMY_CAP: usize = 512;

/// Build Γ from generator matrices and translation parts.
pub fn build_crystal(
    name: &str,
    dim: usize,
    matrices: &[IntMatrix],
    vectors: &[RatVector],
    cap: usize,
) -> Result<CrystalGroup, CrystalError> {
    if matrices.len() != vectors.len() {
        return Err(CrystalError::DimensionMismatch(format!(
            "{} matrices but {} vectors",
            matrices.len(),
            vectors.len()
        )));
    }
    if let Some(i) = vectors.iter().position(|v| v.len() != dim) {
        return Err(CrystalError::DimensionMismatch(format!("vector {i} has length != {dim}")));
    }
    let holonomy = close_group(dim, matrices, cap)?;

    // a translation generator outside Zⁿ, or two lifts of one matrix that
    // differ by a non-lattice translation, enlarge the translation subgroup
    for (i, m) in matrices.iter().enumerate() {
        if m.is_identity() && !is_integral(&vectors[i]) {
            return Err(CrystalError::NotFaithful(format!(
                "generator {i} is a translation outside the lattice"
            )));
        }
        for j in 0..i {
            if matrices[j] == *m && reduce_mod_one(&vectors[j]) != reduce_mod_one(&vectors[i]) {
                return Err(CrystalError::NotFaithful(format!(
                    "generators {j} and {i} share a matrix but differ by a non-lattice translation"
                )));
            }
        }
    }

    let order = holonomy.order();
    let gen_idx: Vec<usize> = (0..matrices.len()).map(|i| holonomy.generator_index(i)).collect();
    let reduced_gens: Vec<RatVector> = vectors.iter().map(|v| reduce_mod_one(v)).collect();
    let mut table: Vec<Option<RatVector>> = vec![None; order];
    table[0] = Some(vec![BigRational::zero(); dim]);
    let mut queue = VecDeque::from([0usize]);
    let mut visited = vec![false; order];
    while let Some(x) = queue.pop_front() {
        if visited[x] {
            continue;
        }
        visited[x] = true;
        let ax = table[x].clone().unwrap();
        let mx = to_rat(holonomy.element(x));
        for (gi, &g) in gen_idx.iter().enumerate() {
            let y = holonomy.mul(x, g);
            let moved = mx.mul_vec(&reduced_gens[gi]);
            let cand: RatVector =
                reduce_mod_one(&ax.iter().zip(&moved).map(|(a, b)| a + b).collect::<Vec<_>>());
            match &table[y] {
                None => {
                    table[y] = Some(cand);
                    queue.push_back(y);
                }
                Some(existing) if *existing == cand => {}
                Some(_) => {
                    return Err(CrystalError::InconsistentVectorSystem { element: x, generator: gi })
                }
            }
            if !visited[y] {
                queue.push_back(y);
            }
        }
    }
    let vectors_full: Vec<RatVector> = table.into_iter().map(|v| v.unwrap()).collect();
    Ok(CrystalGroup {
        name: name.to_string(),
        dim,
        holonomy,
        vectors: vectors_full,
        generator_vectors: vectors.to_vec(),
    })
}

/// Parse helper for tests and the catalog: rows of i64 and "p/q" style pairs.
pub fn rat_vec(v: &[(i64, i64)]) -> RatVector {
    v.iter().map(|&(p, q)| BigRational::new(p.into(), q.into())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantsReport {
    pub dimension: usize,
    pub holonomy_order: usize,
    pub betti1: usize,
    pub center_rank: usize,
    pub orientable: bool,
    pub torsion_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Abelianization {
    pub free_rank: usize,
    /// elementary divisors > 1
    pub torsion: Vec<BigInt>,
}

impl Abelianization {
    /// Abelian group presented by integer relation rows over `cols` generators.
    pub fn from_relations(rel: &IntMatrix, cols: usize) -> Self {
        if rel.rows() == 0 {
            return Abelianization { free_rank: cols, torsion: Vec::new() };
        }
        let divs = smith_divisors(rel);
        let rank = divs.iter().filter(|d| !d.is_zero()).count();
        Abelianization {
            free_rank: cols - rank,
            torsion: divs.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
        }
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl std::fmt::Display for Abelianization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = (0..self.free_rank).map(|_| "Z".to_string()).collect();
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Isomorphism-invariant tuple used to tell catalog groups apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub dimension: usize,
    pub holonomy_order: usize,
    pub orientable: bool,
    pub betti1: usize,
    pub abelianization: Vec<BigInt>,
    pub free_rank: usize,
}

/// Data of the epimorphism Γ → Z used by the Calabi reduction.
#[derive(Clone, Debug, Serialize)]
pub struct CalabiReduction {
    pub kernel: CrystalGroup,
    /// primitive H-fixed lattice vector
    pub fixed_vector: IntVector,
    /// H-invariant functional λ with λ(v) = 1
    pub functional: RatVector,
    /// λ(Γ) = step · Z
    pub step: BigRational,
    /// basis of the kernel lattice Zⁿ ∩ ker λ (columns of the embedding)
    pub hyperplane_basis: Vec<IntVector>,
}

impl Serialize for CrystalGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CrystalGroup", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("dimension", &self.dim)?;
        let gens: Vec<(Vec<Vec<String>>, Vec<String>)> = self
            .holonomy
            .generators()
            .iter()
            .zip(&self.generator_vectors)
            .map(|(m, v)| {
                (
                    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
                    v.iter().map(ToString::to_string).collect(),
                )
            })
            .collect();
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}

impl CrystalGroup {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn holonomy(&self) -> &FiniteMatrixGroup {
        &self.holonomy
    }

    pub fn holonomy_order(&self) -> usize {
        self.holonomy.order()
    }

    pub fn matrix(&self, h: usize) -> &IntMatrix {
        self.holonomy.element(h)
    }

    pub fn generator_matrices(&self) -> &[IntMatrix] {
        self.holonomy.generators()
    }

    pub fn generator_vectors(&self) -> &[RatVector] {
        &self.generator_vectors
    }

    /// a(h), reduced into [0,1)ⁿ.
    pub fn vector(&self, h: usize) -> &RatVector {
        &self.vectors[h]
    }

    pub fn vectors(&self) -> &[RatVector] {
        &self.vectors
    }

    pub fn lift(&self, h: usize) -> GroupElement {
        GroupElement { holonomy: h, translation: self.vectors[h].clone() }
    }

    pub fn translation(&self, z: &[BigInt]) -> GroupElement {
        GroupElement { holonomy: 0, translation: z.iter().map(|x| BigRational::from_integer(x.clone())).collect() }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { holonomy: 0, translation: vec![BigRational::zero(); self.dim] }
    }

    pub fn compose(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let moved = to_rat(self.matrix(a.holonomy)).mul_vec(&b.translation);
        GroupElement {
            holonomy: self.holonomy.mul(a.holonomy, b.holonomy),
            translation: a.translation.iter().zip(&moved).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        let hi = self.holonomy.inverse(a.holonomy);
        let moved = to_rat(self.matrix(hi)).mul_vec(&a.translation);
        GroupElement { holonomy: hi, translation: moved.into_iter().map(|x| -x).collect() }
    }

    pub fn power(&self, a: &GroupElement, k: usize) -> GroupElement {
        (0..k).fold(self.identity(), |acc, _| self.compose(&acc, a))
    }

    /// Membership: translation part congruent to a(h) modulo the lattice.
    pub fn contains(&self, a: &GroupElement) -> bool {
        a.translation.len() == self.dim && reduce_mod_one(&a.translation) == self.vectors[a.holonomy]
    }

    /// The 2-cocycle f(g,h) = a(g) + g a(h) − a(gh) ∈ Zⁿ of the stored
    /// vector system.
    pub fn cocycle_value(&self, g: usize, h: usize) -> IntVector {
        let gh = self.holonomy.mul(g, h);
        let moved = to_rat(self.matrix(g)).mul_vec(&self.vectors[h]);
        self.vectors[g]
            .iter()
            .zip(&moved)
            .zip(&self.vectors[gh])
            .map(|((a, b), c)| {
                let v = a + b - c;
                assert!(v.is_integer(), "vector system is not a cocycle mod Zⁿ");
                v.to_integer()
            })
            .collect()
    }

    /// Checks the cocycle identity on all |H|² pairs.
    pub fn verify_cocycle(&self) -> bool {
        let n = self.holonomy.order();
        (0..n).all(|g| {
            (0..n).all(|h| {
                let gh = self.holonomy.mul(g, h);
                let moved = to_rat(self.matrix(g)).mul_vec(&self.vectors[h]);
                let s: RatVector = self.vectors[g].iter().zip(&moved).map(|(a, b)| a + b).collect();
                reduce_mod_one(&s) == self.vectors[gh]
            })
        }) && self.vectors[0].iter().all(Zero::is_zero)
    }

    fn fixed_lattice_matrix(&self) -> IntMatrix {
        let n = self.dim;
        let blocks: Vec<IntMatrix> = self
            .holonomy
            .generators()
            .iter()
            .map(|g| g - &IntMatrix::identity(n))
            .collect();
        if blocks.is_empty() {
            IntMatrix::zeros(0, n)
        } else {
            IntMatrix::vstack(&blocks)
        }
    }

    /// dim (Qⁿ)^H, from the rational null space.
    pub fn betti1(&self) -> usize {
        let m = self.fixed_lattice_matrix();
        if m.rows() == 0 {
            return self.dim;
        }
        to_rat(&m).nullspace().len()
    }

    /// Basis of the fixed lattice (Zⁿ)^H, in Hermite form.
    pub fn fixed_lattice(&self) -> Vec<IntVector> {
        kernel_basis(&self.fixed_lattice_matrix())
    }

    pub fn center_rank(&self) -> usize {
        self.fixed_lattice().len()
    }

    pub fn is_orientable(&self) -> bool {
        self.holonomy.generators().iter().all(|g| g.det().is_one())
    }

    /// `N_h = I + h + … + h^{p−1}` for an element of order p.
    fn norm_matrix(&self, h: usize, p: usize) -> IntMatrix {
        let mut acc = IntMatrix::zeros(self.dim, self.dim);
        let mut x = 0;
        for _ in 0..p {
            acc = &acc + self.matrix(x);
            x = self.holonomy.mul(x, h);
        }
        acc
    }

    /// A finite-order element of Γ of prime order, if any.
    pub fn torsion_element(&self) -> Option<GroupElement> {
        for sub in self.holonomy.prime_order_elements() {
            let h = sub.generator;
            let norm = self.norm_matrix(h, sub.prime);
            let na = to_rat(&norm).mul_vec(&self.vectors[h]);
            debug_assert!(is_integral(&na));
            let rhs: IntVector = na.iter().map(|x| -x.to_integer()).collect();
            if let Ok(sol) = solve_integer_linear(&norm, &rhs) {
                let t: RatVector = self.vectors[h]
                    .iter()
                    .zip(&sol.particular)
                    .map(|(a, z)| a + BigRational::from_integer(z.clone()))
                    .collect();
                return Some(GroupElement { holonomy: h, translation: t });
            }
        }
        None
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion_element().is_none()
    }

    /// Torsion-freeness through restrictions of the extension class to every
    /// prime-order subgroup, computed with the bar complex.
    pub fn is_torsion_free_by_restriction(&self) -> bool {
        let f = cohomology::cocycle_of(self);
        self.holonomy.prime_order_elements().iter().all(|sub| {
            let class = restriction(&self.holonomy, &f, &sub.members)
                .expect("restriction to a cyclic subgroup fits any cap");
            !class.is_zero()
        })
    }

    pub fn invariants_report(&self) -> InvariantsReport {
        InvariantsReport {
            dimension: self.dim,
            holonomy_order: self.holonomy.order(),
            betti1: self.betti1(),
            center_rank: self.center_rank(),
            orientable: self.is_orientable(),
            torsion_free: self.is_torsion_free(),
        }
    }

    /// Relation matrix of the abelianized presentation with generators
    /// e₁…eₙ followed by one symbol per holonomy element.
    pub fn abelianization_relations(&self) -> IntMatrix {
        let n = self.dim;
        let order = self.holonomy.order();
        let cols = n + order;
        let mut rows: Vec<IntVector> = Vec::new();
        for h in 0..order {
            let m = self.matrix(h);
            for j in 0..n {
                let mut r = vec![BigInt::zero(); cols];
                for i in 0..n {
                    r[i] = m[(i, j)].clone();
                }
                r[j] -= BigInt::one();
                if r.iter().any(|x| !x.is_zero()) {
                    rows.push(r);
                }
            }
        }
        for g in 0..order {
            for h in 0..order {
                let gh = self.holonomy.mul(g, h);
                let f = self.cocycle_value(g, h);
                let mut r = vec![BigInt::zero(); cols];
                r[n + g] += BigInt::one();
                r[n + h] += BigInt::one();
                r[n + gh] -= BigInt::one();
                for i in 0..n {
                    r[i] -= &f[i];
                }
                rows.push(r);
            }
        }
        IntMatrix::from_rows(rows)
    }

    pub fn abelianization(&self) -> Abelianization {
        let rel = self.abelianization_relations();
        Abelianization::from_relations(&rel, self.dim + self.holonomy.order())
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let ab = self.abelianization();
        Fingerprint {
            dimension: self.dim,
            holonomy_order: self.holonomy.order(),
            orientable: self.is_orientable(),
            betti1: self.betti1(),
            abelianization: ab.torsion,
            free_rank: ab.free_rank,
        }
    }

    /// Replace the lattice basis: conjugate by `x ↦ U x` (U unimodular).
    pub fn change_basis(&self, u: &IntMatrix) -> Result<CrystalGroup, CrystalError> {
        let ui = u.inverse_int().ok_or(CrystalError::NotInvertible { index: 0 })?;
        let mats: Vec<IntMatrix> =
            self.holonomy.generators().iter().map(|g| &(u * g) * &ui).collect();
        let ur = to_rat(u);
        let vecs: Vec<RatVector> = self.generator_vectors.iter().map(|v| ur.mul_vec(v)).collect();
        build_crystal(&self.name, self.dim, &mats, &vecs, self.holonomy.order().max(1))
    }

    /// Conjugate by the translation `x ↦ x + d`: a(h) becomes a(h) + (I − h) d.
    pub fn conjugate_by_translation(&self, d: &[BigRational]) -> Result<CrystalGroup, CrystalError> {
        let vecs: Vec<RatVector> = self
            .holonomy
            .generators()
            .iter()
            .zip(&self.generator_vectors)
            .map(|(g, v)| {
                let gd = to_rat(g).mul_vec(d);
                v.iter().zip(d).zip(&gd).map(|((a, x), y)| a + x - y).collect()
            })
            .collect();
        build_crystal(&self.name, self.dim, self.holonomy.generators(), &vecs, self.holonomy.order().max(1))
    }

    /// Kernel of an epimorphism Γ → Z coming from an H-fixed direction.
    pub fn calabi_reduce(&self) -> Result<CalabiReduction, CrystalError> {
        let fixed = self.fixed_lattice();
        let Some(v) = fixed.first().cloned() else { return Err(CrystalError::NoCenter) };
        let n = self.dim;
        // invariant form S = Σ gᵀ g; λ(x) = vᵀ S x / vᵀ S v is H-invariant
        let mut s = RatMatrix::zeros(n, n);
        for g in self.holonomy.elements() {
            let gr = to_rat(g);
            s = &s + &(&gr.transpose() * &gr);
        }
        let vr: RatVector = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let sv = s.mul_vec(&vr);
        let vsv: BigRational = vr.iter().zip(&sv).map(|(a, b)| a * b).sum();
        let functional: RatVector = sv.iter().map(|x| x / &vsv).collect();
        let lambda = |t: &[BigRational]| -> BigRational { functional.iter().zip(t).map(|(a, b)| a * b).sum() };

        // integral row w ∝ λ, and the lattice Zⁿ ∩ ker λ
        let den = functional.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        let w: IntVector = functional.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        let wmat = IntMatrix::from_rows(vec![w.clone()]);
        let hyper = kernel_basis(&wmat);
        assert_eq!(hyper.len(), n - 1);
        let basis = IntMatrix::from_rows(hyper.clone()).transpose(); // n × (n−1)
        let basis_r = to_rat(&basis);

        // image step: gcd of λ(e_i) and λ(a(h))
        let mut vals: Vec<BigRational> = (0..n).map(|i| functional[i].clone()).collect();
        vals.extend(self.vectors.iter().map(|a| lambda(a)));
        let step = rational_gcd(&vals);

        // holonomy of the kernel: h with λ(a(h)) ∈ λ(Zⁿ)
        let lattice_step = rational_gcd(&functional);
        let sub: Vec<usize> = (0..self.holonomy.order())
            .filter(|&h| (lambda(&self.vectors[h]) / &lattice_step).is_integer())
            .collect();
        // small generating set of the kernel holonomy
        let mut gens: Vec<usize> = Vec::new();
        let mut span = self.holonomy.subgroup(&[]);
        for &h in &sub {
            if !span.contains(&h) {
                gens.push(h);
                span = self.holonomy.subgroup(&gens);
            }
        }
        let mut mats = Vec::new();
        let mut vecs = Vec::new();
        for &h in &gens {
            let gb = to_rat(&(self.matrix(h) * &basis));
            let coords = solve_columns(&basis_r, &gb);
            mats.push(coords.map(|x| x.to_integer()));
            // shift a(h) by a lattice vector into ker λ
            let rhs = -(lambda(&self.vectors[h]) * BigRational::from_integer(den.clone()));
            assert!(rhs.is_integer());
            let sol = solve_integer_linear(&wmat, &[rhs.to_integer()])
                .expect("shift into the hyperplane exists by choice of h");
            let t: RatVector = self.vectors[h]
                .iter()
                .zip(&sol.particular)
                .map(|(a, z)| a + BigRational::from_integer(z.clone()))
                .collect();
            let y = basis_r.solve(&t).expect("translation lies in the hyperplane");
            vecs.push(y);
        }
        let kernel = build_crystal(&format!("{}/Z", self.name), n - 1, &mats, &vecs, self.holonomy.order())?;
        Ok(CalabiReduction { kernel, fixed_vector: v, functional, step, hyperplane_basis: hyper })
    }
}

/// An affine map `y ↦ M y + t` with integral M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: IntMatrix,
    pub translation: RatVector,
}

impl AffineMap {
    pub fn compose(&self, o: &AffineMap) -> AffineMap {
        let moved = to_rat(&self.linear).mul_vec(&o.translation);
        AffineMap {
            linear: &self.linear * &o.linear,
            translation: self.translation.iter().zip(&moved).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let li = self.linear.inverse_int().expect("unimodular linear part");
        let t = to_rat(&li).mul_vec(&self.translation);
        AffineMap { linear: li, translation: t.into_iter().map(|x| -x).collect() }
    }
}

/// The crystallographic group generated by affine maps of Qᵐ, rewritten in
/// a basis of its translation lattice.
pub fn crystal_from_affine(name: &str, dim: usize, gens: &[AffineMap], cap: usize) -> Result<CrystalGroup, CrystalError> {
    crystal_from_affine_with_basis(name, dim, gens, cap).map(|(g, _)| g)
}

/// As [`crystal_from_affine`], also returning the translation lattice basis
/// (columns) in the original coordinates.
pub fn crystal_from_affine_with_basis(
    name: &str,
    dim: usize,
    gens: &[AffineMap],
    cap: usize,
) -> Result<(CrystalGroup, RatMatrix), CrystalError> {
    let mats: Vec<IntMatrix> = gens.iter().map(|g| g.linear.clone()).collect();
    let lin = close_group(dim, &mats, cap)?;
    let id = AffineMap { linear: IntMatrix::identity(dim), translation: vec![BigRational::zero(); dim] };
    let mut reps: Vec<Option<AffineMap>> = vec![None; lin.order()];
    reps[0] = Some(id);
    let mut translations: Vec<RatVector> = Vec::new();
    // Schreier generators of the translation subgroup
    for x in 0..lin.order() {
        let rx = reps[x].clone().expect("BFS order reaches every element");
        for g in gens {
            let cand = rx.compose(g);
            let y = lin.index_of(&cand.linear).expect("closed");
            match &reps[y] {
                None => reps[y] = Some(cand),
                Some(ry) => {
                    let t: RatVector = cand.translation.iter().zip(&ry.translation).map(|(a, b)| a - b).collect();
                    if t.iter().any(|v| !v.is_zero()) {
                        translations.push(t);
                    }
                }
            }
        }
    }
    if reps.iter().any(Option::is_none) {
        // close_group visits in BFS order, which right-multiplication above follows
        return Err(CrystalError::DimensionMismatch("affine closure incomplete".into()));
    }
    let den = translations
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let dr = BigRational::from_integer(den.clone());
    let scaled: Vec<IntVector> =
        translations.iter().map(|t| t.iter().map(|x| (x * &dr).to_integer()).collect()).collect();
    let basis = crate::exactmath::lattice_basis(&scaled, dim);
    if basis.len() != dim {
        return Err(CrystalError::DimensionMismatch("translations do not span a full lattice".into()));
    }
    let mut p = RatMatrix::zeros(dim, dim);
    for (j, b) in basis.iter().enumerate() {
        for i in 0..dim {
            p[(i, j)] = BigRational::new(b[i].clone(), den.clone());
        }
    }
    let pi = p.inverse().expect("basis is independent");
    let mut new_mats = Vec::new();
    let mut new_vecs = Vec::new();
    for g in gens {
        let m = &(&pi * &to_rat(&g.linear)) * &p;
        let m = crate::exactmath::to_int(&m)
            .ok_or_else(|| CrystalError::DimensionMismatch("linear part does not preserve the lattice".into()))?;
        if m.is_identity() {
            continue;
        }
        new_mats.push(m);
        new_vecs.push(pi.mul_vec(&g.translation));
    }
    Ok((build_crystal(name, dim, &new_mats, &new_vecs, cap)?, p))
}

/// Γ₁ × Γ₂ acting block-diagonally on R^{n₁+n₂}.
pub fn crystal_product(name: &str, a: &CrystalGroup, b: &CrystalGroup) -> Result<CrystalGroup, CrystalError> {
    let (na, nb) = (a.dim(), b.dim());
    let mut mats = Vec::new();
    let mut vecs = Vec::new();
    for (m, v) in a.generator_matrices().iter().zip(a.generator_vectors()) {
        mats.push(m.direct_sum(&IntMatrix::identity(nb)));
        vecs.push(v.iter().cloned().chain(std::iter::repeat_n(BigRational::zero(), nb)).collect());
    }
    for (m, v) in b.generator_matrices().iter().zip(b.generator_vectors()) {
        mats.push(IntMatrix::identity(na).direct_sum(m));
        vecs.push(std::iter::repeat_n(BigRational::zero(), na).chain(v.iter().cloned()).collect());
    }
    let cap = a.holonomy_order() * b.holonomy_order();
    build_crystal(name, na + nb, &mats, &vecs, cap)
}

/// Solve `B X = C` exactly for X (B full column rank, consistent system).
pub(crate) fn solve_columns(b: &RatMatrix, c: &RatMatrix) -> RatMatrix {
    let k = b.cols();
    let mut out = RatMatrix::zeros(k, c.cols());
    for j in 0..c.cols() {
        let x = b.solve(&c.col(j)).expect("column lies in the span");
        for i in 0..k {
            out[(i, j)] = x[i].clone();
        }
    }
    out
}

/// Generator of the subgroup of Q spanned by the values.
pub fn rational_gcd(vals: &[BigRational]) -> BigRational {
    use num_integer::Integer;
    let den = vals.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let g = vals
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&(x * BigRational::from_integer(den.clone())).to_integer()));
    BigRational::new(g, den)
}
