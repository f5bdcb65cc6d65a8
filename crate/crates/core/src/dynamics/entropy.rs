use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::AffineEndo;
use crate::crystal::{solve_columns, CrystalGroup};
use crate::exactmath::{charpoly, log_mahler_measure, max_root_modulus, Enclosure, IntMatrix, RatMatrix};

/// h(f) = Σ_{|λ|>1} log|λ| over eigenvalues of F.
pub fn entropy_affine(e: &AffineEndo) -> Enclosure {
    log_mahler_measure(&charpoly(&crate::exactmath::to_rat(&e.linear)))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// k-th compound matrix: k×k minors in lexicographic subset order.
pub fn compound(m: &IntMatrix, k: usize) -> IntMatrix {
    let idx = subsets(m.rows(), k);
    let mut out = IntMatrix::zeros(idx.len(), idx.len());
    for (a, rows) in idx.iter().enumerate() {
        for (b, cols) in idx.iter().enumerate() {
            let minor = IntMatrix::from_rows(rows.iter().map(|&r| cols.iter().map(|&c| m[(r, c)].clone()).collect()).collect());
            out[(a, b)] = minor.det();
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyAction {
    /// matrix of f* on (Λᵏ(Qⁿ)*)^H in a basis of invariant forms, k = 0..n
    pub degrees: Vec<RatMatrix>,
    pub spectral_radius: Enclosure,
}

/// f* on H^k(M, Q) = (Λᵏ(Qⁿ)*)^H: forms are row vectors ω, f*ω = ω·Λᵏ(F).
pub fn cohomology_action(g: &CrystalGroup, e: &AffineEndo) -> CohomologyAction {
    let n = g.dim();
    let mut degrees = Vec::with_capacity(n + 1);
    let mut sp = Enclosure::exact(0.0);
    for k in 0..=n {
        let size = subsets(n, k).len();
        let blocks: Vec<RatMatrix> = g
            .holonomy()
            .generators()
            .iter()
            .map(|h| {
                let mut c = crate::exactmath::to_rat(&compound(h, k)).transpose();
                for i in 0..size {
                    c[(i, i)] -= BigRational::one();
                }
                c
            })
            .collect();
        let null = if blocks.is_empty() {
            (0..size)
                .map(|i| (0..size).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
                .collect()
        } else {
            RatMatrix::vstack(&blocks).nullspace()
        };
        let mut w = RatMatrix::zeros(size, null.len());
        for (j, v) in null.iter().enumerate() {
            for i in 0..size {
                w[(i, j)] = v[i].clone();
            }
        }
        let pull = &crate::exactmath::to_rat(&compound(&e.linear, k)).transpose() * &w;
        let a = solve_columns(&w, &pull);
        if a.rows() > 0 {
            let r = max_root_modulus(&charpoly(&a));
            sp = Enclosure { lo: sp.lo.max(r.lo), hi: sp.hi.max(r.hi) };
        }
        degrees.push(a);
    }
    CohomologyAction { degrees, spectral_radius: sp }
}

#[derive(Clone, Debug, Serialize)]
pub struct EcReport {
    pub log_sp: Enclosure,
    pub entropy: Enclosure,
    /// the affine representative satisfies log sp(f) ≤ h(f)
    pub holds: bool,
}

pub fn ec_check(g: &CrystalGroup, e: &AffineEndo) -> EcReport {
    let sp = cohomology_action(g, e).spectral_radius;
    let log_sp = if sp.hi == 0.0 { Enclosure::exact(0.0) } else { sp.ln() };
    let entropy = entropy_affine(e);
    let holds = log_sp.possibly_le(&entropy);
    debug_assert!(holds, "log sp <= h fails for an affine map");
    EcReport { log_sp, entropy, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::{build_crystal, rat_vec};
    use crate::dynamics::validate_endo;
    use crate::exactmath::{int_diag, int_matrix};

    fn zero() -> Vec<BigRational> {
        vec![BigRational::zero(); 2]
    }

    #[test]
    fn cat_map_equality() {
        let t2 = build_crystal("t2", 2, &[], &[], 1).unwrap();
        let e = validate_endo(&t2, &int_matrix(&[&[2, 1], &[1, 1]]), &zero()).unwrap();
        let r = ec_check(&t2, &e);
        let want = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((r.entropy.mid() - want).abs() < 1e-9);
        assert!((r.log_sp.mid() - r.entropy.mid()).abs() < 1e-9);
        assert!(r.holds);
    }

    #[test]
    fn klein_diag_and_rotation() {
        let k = build_crystal("klein", 2, &[int_diag(&[1, -1])], &[rat_vec(&[(1, 2), (0, 1)])], 4).unwrap();
        let e = validate_endo(&k, &int_diag(&[3, 2]), &zero()).unwrap();
        let act = cohomology_action(&k, &e);
        assert_eq!(act.degrees.iter().map(RatMatrix::rows).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert!((act.spectral_radius.mid() - 3.0).abs() < 1e-12);
        assert!((entropy_affine(&e).mid() - 6f64.ln()).abs() < 1e-12);
        assert!(ec_check(&k, &e).holds);
        let t2 = build_crystal("t2", 2, &[], &[], 1).unwrap();
        let rot = validate_endo(&t2, &int_matrix(&[&[0, -1], &[1, 0]]), &zero()).unwrap();
        assert_eq!(entropy_affine(&rot), Enclosure::exact(0.0));
        let id = validate_endo(&k, &IntMatrix::identity(2), &zero()).unwrap();
        assert_eq!(cohomology_action(&k, &id).spectral_radius, Enclosure::exact(1.0));
        assert_eq!(ec_check(&k, &id).log_sp, Enclosure::exact(0.0));
    }

    #[test]
    fn compound_of_diagonal() {
        let c = compound(&int_diag(&[2, 3, 5]), 2);
        assert_eq!(c, int_diag(&[6, 10, 15]));
        assert_eq!(compound(&int_diag(&[2, 3]), 0), IntMatrix::identity(1));
    }
}
