//! Smallest dimension of a flat manifold with prescribed holonomy, searched
//! over direct sums of catalog lattices.

use serde::Serialize;

use super::{cohomology::torsion_free_classes, CrystalError, CrystalGroup};
use crate::exactmath::IntMatrix;
use crate::groups::close_group;
use crate::repanalysis::{mult_free_check, IntegralRep, Tristate};

/// An indecomposable lattice: one matrix per abstract generator.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogLattice {
    pub name: String,
    pub matrices: Vec<IntMatrix>,
}

impl CatalogLattice {
    pub fn new(name: &str, matrices: Vec<IntMatrix>) -> Self {
        Self { name: name.to_string(), matrices }
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, IntMatrix::rows)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeCatalog {
    pub group_name: String,
    pub group_order: usize,
    pub num_generators: usize,
    pub lattices: Vec<CatalogLattice>,
    /// all indecomposable lattices of the group are listed
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchConstraint {
    None,
    QMultFree,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub dimension: usize,
    pub summands: Vec<String>,
    pub witness: CrystalGroup,
    /// false: only an upper bound, the catalog may be missing lattices
    pub exact: bool,
    /// candidates skipped because multiplicity-freeness was undecided
    pub undecided: usize,
}

const CLASS_CAP: usize = 1 << 14;

/// Multisets of lattice indices (non-decreasing) with the given total rank.
fn multisets(dims: &[usize], total: usize) -> Vec<Vec<usize>> {
    fn go(dims: &[usize], start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..dims.len() {
            if dims[i] > 0 && dims[i] <= left {
                cur.push(i);
                go(dims, i, left - dims[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(dims, 0, total, &mut Vec::new(), &mut out);
    out
}

pub fn minimal_dimension_search(
    catalog: &LatticeCatalog,
    n_max: usize,
    constraint: SearchConstraint,
) -> Result<SearchResult, CrystalError> {
    let dims: Vec<usize> = catalog.lattices.iter().map(CatalogLattice::dim).collect();
    let mut undecided = 0;
    for n in 1..=n_max {
        for combo in multisets(&dims, n) {
            let gens: Vec<IntMatrix> = (0..catalog.num_generators)
                .map(|g| {
                    combo
                        .iter()
                        .map(|&i| catalog.lattices[i].matrices[g].clone())
                        .reduce(|a, b| a.direct_sum(&b))
                        .expect("nonempty combination")
                })
                .collect();
            let h = match close_group(n, &gens, catalog.group_order) {
                Ok(h) if h.order() == catalog.group_order => h,
                _ => continue,
            };
            if constraint == SearchConstraint::QMultFree {
                match mult_free_check(&IntegralRep::from_group(h.clone())) {
                    Ok(Tristate::Yes) => {}
                    Ok(Tristate::No) => continue,
                    _ => {
                        undecided += 1;
                        continue;
                    }
                }
            }
            let found = torsion_free_classes(&h, CLASS_CAP)?;
            if let Some((_, g)) = found.groups.into_iter().next() {
                let summands: Vec<String> = combo.iter().map(|&i| catalog.lattices[i].name.clone()).collect();
                let g = g.with_name(&format!("{} on {}", catalog.group_name, summands.join("+")));
                return Ok(SearchResult { dimension: n, summands, witness: g, exact: catalog.complete, undecided });
            }
        }
    }
    Err(CrystalError::NotFound { max_dim: n_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_diag, int_matrix};

    fn z2_catalog() -> LatticeCatalog {
        LatticeCatalog {
            group_name: "Z2".into(),
            group_order: 2,
            num_generators: 1,
            lattices: vec![
                CatalogLattice::new("trivial", vec![int_diag(&[1])]),
                CatalogLattice::new("sign", vec![int_diag(&[-1])]),
            ],
            complete: false,
        }
    }

    #[test]
    fn z2_needs_dimension_two() {
        let r = minimal_dimension_search(&z2_catalog(), 4, SearchConstraint::None).unwrap();
        assert_eq!(r.dimension, 2);
        assert!(r.witness.is_torsion_free());
        assert!(!r.exact);
    }

    #[test]
    fn z3_needs_dimension_three() {
        let cat = LatticeCatalog {
            group_name: "Z3".into(),
            group_order: 3,
            num_generators: 1,
            lattices: vec![
                CatalogLattice::new("trivial", vec![int_diag(&[1])]),
                CatalogLattice::new("cyclotomic", vec![int_matrix(&[&[0, -1], &[1, -1]])]),
            ],
            complete: false,
        };
        assert_eq!(minimal_dimension_search(&cat, 4, SearchConstraint::None).unwrap().dimension, 3);
    }

    #[test]
    fn klein_four_needs_dimension_three() {
        let chars = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
        let cat = LatticeCatalog {
            group_name: "Z2xZ2".into(),
            group_order: 4,
            num_generators: 2,
            lattices: chars
                .iter()
                .map(|&(a, b)| CatalogLattice::new(&format!("({a},{b})"), vec![int_diag(&[a]), int_diag(&[b])]))
                .collect(),
            complete: false,
        };
        let r = minimal_dimension_search(&cat, 4, SearchConstraint::None).unwrap();
        assert_eq!(r.dimension, 3);
        let q = minimal_dimension_search(&cat, 4, SearchConstraint::QMultFree).unwrap();
        assert_eq!(q.dimension, 3);
    }

    #[test]
    fn not_found_below_bound() {
        assert_eq!(
            minimal_dimension_search(&z2_catalog(), 1, SearchConstraint::None).unwrap_err(),
            CrystalError::NotFound { max_dim: 1 }
        );
    }
}
