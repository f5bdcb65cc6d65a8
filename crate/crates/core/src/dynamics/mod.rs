//! Affine self-maps of flat manifolds: validation, Lefschetz and Nielsen
//! numbers, entropy and the cohomology spectral radius.
//!
//! Every self-map of a flat manifold is homotopic to an affine one, and the
//! quantities here are homotopy invariants, so only affine maps
//! x ↦ F·x + d are represented.

mod entropy;

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::crystal::CrystalGroup;
use crate::exactmath::{is_integral, kernel_basis, reduce_mod_one, smith, to_rat, IntMatrix, RatVector};
use crate::groups::FiniteMatrixGroup;

pub use entropy::{cohomology_action, ec_check, entropy_affine, CohomologyAction, EcReport};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("no holonomy endomorphism is compatible with the linear part")]
    NoCompatibleTheta,
    #[error("translation condition fails at holonomy element {element}")]
    VectorObstruction {
        element: usize,
        /// a translation for which the condition holds, when one exists
        adjustment: Option<RatVector>,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("candidate count exceeds cap {cap}")]
    CapExceeded { cap: usize },
}

/// x ↦ F·x + d together with the induced θ: H → H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineEndo {
    pub linear: IntMatrix,
    pub translation: RatVector,
    pub theta: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixedPointReport {
    pub lefschetz: BigInt,
    pub nielsen: BigInt,
    pub anosov: bool,
    /// det(I − φ(h)·F) in holonomy index order
    pub terms: Vec<BigInt>,
    /// some term vanishes; its Nielsen contribution is taken as 0
    pub degenerate: bool,
}

/// θ determined by values on the generators, checked on every Cayley edge.
fn extend_hom(h: &FiniteMatrixGroup, images: &[usize]) -> Option<Vec<usize>> {
    let mut theta: Vec<Option<usize>> = vec![None; h.order()];
    theta[h.identity()] = Some(h.identity());
    let mut queue = VecDeque::from([h.identity()]);
    while let Some(x) = queue.pop_front() {
        let tx = theta[x].expect("visited");
        for (i, &img) in images.iter().enumerate() {
            let y = h.mul(x, h.generator_index(i));
            let ty = h.mul(tx, img);
            match theta[y] {
                None => {
                    theta[y] = Some(ty);
                    queue.push_back(y);
                }
                Some(v) if v != ty => return None,
                _ => {}
            }
        }
    }
    theta.into_iter().collect()
}

/// All endomorphisms of H.
pub fn holonomy_endomorphisms(h: &FiniteMatrixGroup) -> Vec<Vec<usize>> {
    let k = h.generators().len();
    let total = h.order().pow(k as u32);
    (0..total)
        .filter_map(|mut code| {
            let images: Vec<usize> = (0..k)
                .map(|_| {
                    let v = code % h.order();
                    code /= h.order();
                    v
                })
                .collect();
            extend_hom(h, &images)
        })
        .collect()
}

fn twisted_commutes(h: &FiniteMatrixGroup, f: &IntMatrix, theta: &[usize]) -> bool {
    (0..h.generators().len()).all(|i| {
        let g = h.generator_index(i);
        (f * h.element(g)) == (h.element(theta[g]) * f)
    })
}

/// θ with φ(θ(h))·F = F·φ(h): unique for invertible F, otherwise by search.
pub fn compatible_thetas(g: &CrystalGroup, f: &IntMatrix) -> Vec<Vec<usize>> {
    let h = g.holonomy();
    if let Some(inv) = to_rat(f).inverse() {
        let fr = to_rat(f);
        let theta: Option<Vec<usize>> = h
            .elements()
            .iter()
            .map(|m| {
                let c = &(&fr * &to_rat(m)) * &inv;
                crate::exactmath::to_int(&c).and_then(|c| h.index_of(&c))
            })
            .collect();
        return theta.into_iter().collect();
    }
    holonomy_endomorphisms(h).into_iter().filter(|t| twisted_commutes(h, f, t)).collect()
}

fn vector_defect(g: &CrystalGroup, f: &IntMatrix, d: &[BigRational], theta: &[usize], h: usize) -> RatVector {
    let n = g.dim();
    let fa = to_rat(f).mul_vec(g.vector(h));
    let pd = to_rat(g.matrix(theta[h])).mul_vec(d);
    let at = g.vector(theta[h]);
    (0..n).map(|i| &fa[i] + &d[i] - &pd[i] - &at[i]).collect()
}

fn first_violation(g: &CrystalGroup, f: &IntMatrix, d: &[BigRational], theta: &[usize]) -> Option<usize> {
    (0..g.holonomy_order()).find(|&h| !is_integral(&vector_defect(g, f, d, theta, h)))
}

/// A translation d with (I − φ(θhᵢ))·d ≡ a(θhᵢ) − F·a(hᵢ) mod Zⁿ on the
/// generators, via the Smith form of the stacked system.
fn solve_translation(g: &CrystalGroup, f: &IntMatrix, theta: &[usize]) -> Option<RatVector> {
    let n = g.dim();
    let h = g.holonomy();
    let k = h.generators().len();
    if k == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    let zero = vec![BigRational::zero(); n];
    let mut m = IntMatrix::zeros(k * n, n);
    let mut b: RatVector = Vec::with_capacity(k * n);
    for i in 0..k {
        let gi = h.generator_index(i);
        let p = h.element(theta[gi]);
        for r in 0..n {
            for c in 0..n {
                m[(i * n + r, c)] = BigInt::from((r == c) as i64) - &p[(r, c)];
            }
        }
        b.extend(vector_defect(g, f, &zero, theta, gi).into_iter().map(|x| -x));
    }
    let s = smith(&m);
    let ub = to_rat(&s.u).mul_vec(&b);
    let mut y = vec![BigRational::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        let di = if i < n { s.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c.is_integer() {
                return None;
            }
        } else {
            y[i] = c / BigRational::from_integer(di);
        }
    }
    let d = reduce_mod_one(&to_rat(&s.v).mul_vec(&y));
    first_violation(g, f, &d, theta).is_none().then_some(d)
}

/// Check F·φ(h) = φ(θ(h))·F and F·a(h) + (I − φ(θ(h)))·d − a(θ(h)) ∈ Zⁿ.
pub fn validate_endo(g: &CrystalGroup, f: &IntMatrix, d: &[BigRational]) -> Result<AffineEndo, DynamicsError> {
    let n = g.dim();
    if f.rows() != n || f.cols() != n || d.len() != n {
        return Err(DynamicsError::DimensionMismatch(format!("expected {n}x{n} matrix and length-{n} vector")));
    }
    let thetas = compatible_thetas(g, f);
    if thetas.is_empty() {
        return Err(DynamicsError::NoCompatibleTheta);
    }
    let mut offending = None;
    for theta in &thetas {
        match first_violation(g, f, d, theta) {
            None => return Ok(AffineEndo { linear: f.clone(), translation: d.to_vec(), theta: theta.clone() }),
            Some(h) => {
                offending.get_or_insert(h);
            }
        }
    }
    let adjustment = thetas.iter().find_map(|t| solve_translation(g, f, t));
    Err(DynamicsError::VectorObstruction { element: offending.expect("some theta tried"), adjustment })
}

/// A valid endo with linear part F, choosing the translation when needed.
pub fn endo_with_linear(g: &CrystalGroup, f: &IntMatrix) -> Option<AffineEndo> {
    let zero = vec![BigRational::zero(); g.dim()];
    match validate_endo(g, f, &zero) {
        Ok(e) => Some(e),
        Err(DynamicsError::VectorObstruction { adjustment: Some(d), .. }) => validate_endo(g, f, &d).ok(),
        Err(_) => None,
    }
}

/// |H|·L = Σ_h det(I − φ(h)F) and |H|·N = Σ_h |det(I − φ(h)F)|.
pub fn fixed_point_data(g: &CrystalGroup, e: &AffineEndo) -> FixedPointReport {
    let n = g.dim();
    let id = IntMatrix::identity(n);
    let terms: Vec<BigInt> = g.holonomy().elements().iter().map(|m| (&id - &(m * &e.linear)).det()).collect();
    let order = BigInt::from(g.holonomy_order());
    let sum: BigInt = terms.iter().sum();
    let abs_sum: BigInt = terms.iter().map(Signed::abs).sum();
    let (lefschetz, r) = sum.div_rem(&order);
    assert!(r.is_zero(), "Lefschetz number is an integer");
    let (nielsen, r) = abs_sum.div_rem(&order);
    assert!(r.is_zero(), "Nielsen number is an integer");
    let degenerate = terms.iter().any(Zero::is_zero);
    let anosov = nielsen == lefschetz.abs();
    FixedPointReport { lefschetz, nielsen, anosov, terms, degenerate }
}

/// Fixed points of the induced map on Rⁿ/Γ, counted directly: solve
/// F·x + d = φ(h)·x + a(h) + z for x ∈ [0,1)ⁿ over all h and z, then count
/// orbits of the holonomy action on the torus. None when some F − φ(h) is
/// singular.
pub fn count_fixed_points(g: &CrystalGroup, e: &AffineEndo) -> Option<usize> {
    let n = g.dim();
    let hol = g.holonomy();
    let mut points: HashSet<RatVector> = HashSet::new();
    for h in 0..hol.order() {
        let a = &e.linear - hol.element(h);
        let inv = to_rat(&a).inverse()?;
        let shift: Vec<BigRational> = (0..n).map(|i| &g.vector(h)[i] - &e.translation[i]).collect();
        let ranges: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                let lo: i64 = (0..n).map(|j| a[(i, j)].to_i64().expect("small").min(0)).sum();
                let hi: i64 = (0..n).map(|j| a[(i, j)].to_i64().expect("small").max(0)).sum();
                let s = shift[i].floor().to_integer().to_i64().expect("small");
                (lo - s - 1, hi - s + 1)
            })
            .collect();
        let mut z: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'outer: loop {
            let rhs: RatVector = (0..n).map(|i| &shift[i] + BigRational::from_integer(z[i].into())).collect();
            let x = inv.mul_vec(&rhs);
            if x.iter().all(|c| !c.is_negative() && c < &BigRational::one()) {
                points.insert(x);
            }
            for i in 0..n {
                if z[i] < ranges[i].1 {
                    z[i] += 1;
                    continue 'outer;
                }
                z[i] = ranges[i].0;
            }
            break;
        }
    }
    let canon = |x: &RatVector| -> RatVector {
        (0..hol.order())
            .map(|h| {
                let y = to_rat(hol.element(h)).mul_vec(x);
                reduce_mod_one(&y.iter().zip(g.vector(h)).map(|(p, q)| p + q).collect::<Vec<_>>())
            })
            .min()
            .expect("identity present")
    };
    let orbits: BTreeSet<RatVector> = points.iter().map(canon).collect();
    Some(orbits.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub linear: IntMatrix,
    pub lefschetz: BigInt,
    pub nielsen: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnosovScan {
    pub bound: i64,
    /// lattice points visited before validation
    pub candidates: usize,
    /// linear parts admitting a valid endo
    pub valid: usize,
    pub degenerate: usize,
    pub counterexamples: Vec<ScanEntry>,
}

pub const DEFAULT_SCAN_CAP: usize = 2_000_000;

/// Integer vectors of a lattice given in Hermite form with all entries in
/// [−B, B], by backtracking over the pivot coordinates.
fn lattice_points_in_box(basis: &[Vec<BigInt>], dim: usize, bound: i64, out: &mut Vec<Vec<i64>>) {
    let rows: Vec<Vec<i64>> = basis.iter().map(|r| r.iter().map(|x| x.to_i64().expect("small")).collect()).collect();
    let pivots: Vec<usize> = rows.iter().map(|r| r.iter().position(|&x| x != 0).expect("nonzero row")).collect();
    fn rec(rows: &[Vec<i64>], pivots: &[usize], i: usize, cur: &mut Vec<i64>, bound: i64, out: &mut Vec<Vec<i64>>) {
        if i == rows.len() {
            if cur.iter().all(|x| x.abs() <= bound) {
                out.push(cur.clone());
            }
            return;
        }
        let p = pivots[i];
        let piv = rows[i][p];
        for target in -bound..=bound {
            let diff = target - cur[p];
            if diff % piv != 0 {
                continue;
            }
            let c = diff / piv;
            for (x, r) in cur.iter_mut().zip(&rows[i]) {
                *x += c * r;
            }
            rec(rows, pivots, i + 1, cur, bound, out);
            for (x, r) in cur.iter_mut().zip(&rows[i]) {
                *x -= c * r;
            }
        }
    }
    rec(&rows, &pivots, 0, &mut vec![0; dim], bound, out);
}

/// Every integer matrix with entries in [−B, B] admitting a valid affine
/// endo, checked against N = |L|. Exhaustive: a valid F satisfies
/// F·φ(h) = φ(θ(h))·F for some endomorphism θ, so the box is enumerated
/// inside each of these lattices.
pub fn anosov_scan(g: &CrystalGroup, bound: i64, cap: usize) -> Result<AnosovScan, DynamicsError> {
    anosov_scan_with(g, bound, cap, |_, _| {})
}

/// [`anosov_scan`], calling `visit` on every valid endo in scan order.
pub fn anosov_scan_with(
    g: &CrystalGroup,
    bound: i64,
    cap: usize,
    mut visit: impl FnMut(&AffineEndo, &FixedPointReport),
) -> Result<AnosovScan, DynamicsError> {
    let n = g.dim();
    let h = g.holonomy();
    let mut found: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut candidates = 0usize;
    for theta in holonomy_endomorphisms(h) {
        let k = h.generators().len();
        let mut eqs = IntMatrix::zeros(k * n * n, n * n);
        for gi in 0..k {
            let p = h.element(h.generator_index(gi));
            let q = h.element(theta[h.generator_index(gi)]);
            for r in 0..n {
                for c in 0..n {
                    let row = gi * n * n + r * n + c;
                    for t in 0..n {
                        eqs[(row, r * n + t)] += &p[(t, c)];
                        eqs[(row, t * n + c)] -= &q[(r, t)];
                    }
                }
            }
        }
        let basis = kernel_basis(&eqs);
        let estimate = (2 * bound as usize + 1).saturating_pow(basis.len() as u32);
        if candidates.saturating_add(estimate) > cap {
            return Err(DynamicsError::CapExceeded { cap });
        }
        let mut pts = Vec::new();
        lattice_points_in_box(&basis, n * n, bound, &mut pts);
        candidates += estimate;
        found.extend(pts);
    }
    let mut scan = AnosovScan { bound, candidates, valid: 0, degenerate: 0, counterexamples: Vec::new() };
    for v in found {
        let f = IntMatrix::from_vec(n, n, v.into_iter().map(BigInt::from).collect());
        let Some(e) = endo_with_linear(g, &f) else { continue };
        scan.valid += 1;
        let rep = fixed_point_data(g, &e);
        visit(&e, &rep);
        if rep.degenerate {
            scan.degenerate += 1;
        }
        if !rep.anosov {
            scan.counterexamples.push(ScanEntry { linear: f, lefschetz: rep.lefschetz, nielsen: rep.nielsen });
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{build_crystal, rat_vec};
    use crate::exactmath::{int_diag, int_matrix};

    fn klein() -> CrystalGroup {
        build_crystal("klein", 2, &[int_diag(&[1, -1])], &[rat_vec(&[(1, 2), (0, 1)])], 4).unwrap()
    }

    fn zero(n: usize) -> RatVector {
        vec![BigRational::zero(); n]
    }

    #[test]
    fn klein_counterexample() {
        let k = klein();
        let e = validate_endo(&k, &int_diag(&[3, 2]), &zero(2)).unwrap();
        assert_eq!(e.theta, vec![0, 1]);
        let r = fixed_point_data(&k, &e);
        assert_eq!((r.lefschetz.clone(), r.nielsen.clone()), (BigInt::from(-2), BigInt::from(4)));
        assert!(!r.anosov);
        assert_eq!(count_fixed_points(&k, &e), Some(4));
    }

    #[test]
    fn klein_obstruction() {
        let err = validate_endo(&klein(), &int_diag(&[2, 2]), &zero(2)).unwrap_err();
        assert!(matches!(err, DynamicsError::VectorObstruction { adjustment: None, .. }));
    }

    #[test]
    fn cat_map_and_identity() {
        let t2 = build_crystal("t2", 2, &[], &[], 1).unwrap();
        let e = validate_endo(&t2, &int_matrix(&[&[2, 1], &[1, 1]]), &zero(2)).unwrap();
        let r = fixed_point_data(&t2, &e);
        assert_eq!((r.lefschetz, r.nielsen, r.anosov), (BigInt::from(-1), BigInt::one(), true));
        assert_eq!(count_fixed_points(&t2, &e), Some(1));
        let k = klein();
        let id = validate_endo(&k, &IntMatrix::identity(2), &zero(2)).unwrap();
        let r = fixed_point_data(&k, &id);
        assert_eq!((r.lefschetz, r.nielsen), (BigInt::zero(), BigInt::zero()));
        assert!(r.degenerate);
    }

    #[test]
    fn singular_linear_part_finds_theta() {
        let k = klein();
        let e = endo_with_linear(&k, &int_diag(&[2, 0])).unwrap();
        assert!(first_violation(&k, &e.linear, &e.translation, &e.theta).is_none());
    }

    #[test]
    fn scans() {
        let t2 = build_crystal("t2", 2, &[], &[], 1).unwrap();
        let s = anosov_scan(&t2, 2, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!(s.valid, 625);
        assert!(s.counterexamples.is_empty());
        let k = klein();
        let s = anosov_scan(&k, 3, DEFAULT_SCAN_CAP).unwrap();
        assert!(s.counterexamples.iter().any(|c| c.linear == int_diag(&[3, 2])));
        assert!(matches!(anosov_scan(&t2, 2, 10), Err(DynamicsError::CapExceeded { .. })));
    }

    #[test]
    fn nielsen_matches_direct_count_on_klein() {
        let k = klein();
        let s = anosov_scan(&k, 2, DEFAULT_SCAN_CAP).unwrap();
        assert!(s.valid > 0);
        let mut checked = 0;
        for v in box_matrices(2) {
            let f = IntMatrix::from_vec(2, 2, v.into_iter().map(BigInt::from).collect());
            let Some(e) = endo_with_linear(&k, &f) else { continue };
            let r = fixed_point_data(&k, &e);
            if r.degenerate {
                continue;
            }
            assert_eq!(count_fixed_points(&k, &e).map(BigInt::from), Some(r.nielsen.clone()), "{f:?}");
            checked += 1;
        }
        assert!(checked > 10);
    }

    fn box_matrices(b: i64) -> Vec<Vec<i64>> {
        let r: Vec<i64> = (-b..=b).collect();
        let mut out = Vec::new();
        for &a in &r {
            for &c in &r {
                for &d in &r {
                    for &e in &r {
                        out.push(vec![a, c, d, e]);
                    }
                }
            }
        }
        out
    }
}
