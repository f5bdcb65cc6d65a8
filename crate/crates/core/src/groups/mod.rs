//! Finite matrix groups over Z: closure from generators, conjugacy classes,
//! exact character tables and prime-order subgroups.

mod chartab;
pub mod cyclotomic;

use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed};
use thiserror::Error;

use crate::exactmath::IntMatrix;

pub use chartab::{character_table, CharacterTable};
pub use cyclotomic::{Cyclo, CycloField};

pub const DEFAULT_ORDER_CAP: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeded the order cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("generator {index} is not invertible over Z")]
    NotInvertible { index: usize },
    #[error("generator {index} is not a {degree}x{degree} matrix")]
    DimensionMismatch { index: usize, degree: usize },
}

/// A finite subgroup of GL(n, Z), fully enumerated.
///
/// Element 0 is always the identity. The multiplication table is indexed by
/// element position: `mul(i, j)` is the index of `elements[i] * elements[j]`.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    degree: usize,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
    index: HashMap<IntMatrix, usize>,
    table: Vec<Vec<u32>>,
    inverses: Vec<usize>,
}

impl FiniteMatrixGroup {
    pub fn trivial(degree: usize) -> Self {
        close_group(degree, &[], 1).expect("trivial group always closes")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntMatrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of the generator `i` inside the element list.
    pub fn generator_index(&self, i: usize) -> usize {
        self.index[&self.generators[i]]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|a| self.element_order(a)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the subgroup generated by the given element indices.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Conjugacy classes, each sorted, ordered by smallest member (so the
    /// identity class comes first).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        let gens: Vec<usize> = (0..self.generators.len()).map(|i| self.generator_index(i)).collect();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut class = vec![x];
            class_of[x] = id;
            let mut queue = VecDeque::from([x]);
            // orbit under conjugation by generators suffices
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.mul(self.mul(g, y), self.inverse(g));
                    if class_of[z] == usize::MAX {
                        class_of[z] = id;
                        class.push(z);
                        queue.push_back(z);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// One generator (smallest index) for each subgroup of prime order.
    pub fn prime_order_elements(&self) -> Vec<PrimeOrderSubgroup> {
        let mut covered = vec![false; self.order()];
        let mut out = Vec::new();
        for a in 1..self.order() {
            if covered[a] {
                continue;
            }
            let o = self.element_order(a);
            if !is_prime(o) {
                continue;
            }
            let members = self.subgroup(&[a]);
            for &m in &members {
                covered[m] = true;
            }
            out.push(PrimeOrderSubgroup { generator: a, prime: o, members });
        }
        out
    }

    /// Determinant sign check: every element has determinant +1.
    pub fn is_special(&self) -> bool {
        self.elements.iter().all(|m| m.det().is_one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeOrderSubgroup {
    pub generator: usize,
    pub prime: usize,
    pub members: Vec<usize>,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Breadth-first closure of the generated group in GL(n, Z).
pub fn close_group(
    degree: usize,
    gens: &[IntMatrix],
    order_cap: usize,
) -> Result<FiniteMatrixGroup, GroupError> {
    for (i, g) in gens.iter().enumerate() {
        if g.rows() != degree || g.cols() != degree {
            return Err(GroupError::DimensionMismatch { index: i, degree });
        }
        if !g.det().abs().is_one() {
            return Err(GroupError::NotInvertible { index: i });
        }
    }
    let id = IntMatrix::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::from([(id, 0usize)]);
    // right multiplication by each generator, and the BFS parent of each element
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut x = 0;
    while x < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            let y = &elements[x] * g;
            let yi = match index.get(&y) {
                Some(&i) => i,
                None => {
                    if elements.len() >= order_cap {
                        return Err(GroupError::CapExceeded { cap: order_cap });
                    }
                    let i = elements.len();
                    index.insert(y.clone(), i);
                    elements.push(y);
                    parent.push(Some((x, gi)));
                    i
                }
            };
            row.push(yi);
        }
        right.push(row);
        x += 1;
    }
    let n = elements.len();
    let mut table = vec![vec![0u32; n]; n];
    for i in 0..n {
        table[i][0] = i as u32;
        // elements are in BFS order, so parents precede children
        for j in 1..n {
            let (k, g) = parent[j].expect("non-identity elements have a parent");
            table[i][j] = right[table[i][k] as usize][g] as u32;
        }
    }
    let inverses = (0..n)
        .map(|i| (0..n).find(|&j| table[i][j] == 0).expect("every element has an inverse"))
        .collect();
    Ok(FiniteMatrixGroup { degree, generators: gens.to_vec(), elements, index, table, inverses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{int_diag, int_matrix};

    fn perm3(p: [usize; 3]) -> IntMatrix {
        let mut m = IntMatrix::zeros(3, 3);
        for (i, &j) in p.iter().enumerate() {
            m[(j, i)] = 1.into();
        }
        m
    }

    #[test]
    fn closure_examples() {
        assert_eq!(close_group(2, &[int_diag(&[1, -1])], 64).unwrap().order(), 2);
        let v4 = close_group(3, &[int_diag(&[1, -1, -1]), int_diag(&[-1, 1, -1])], 64).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.is_abelian());
        assert_eq!(v4.exponent(), 2);
        let z4 = close_group(2, &[int_matrix(&[&[0, -1], &[1, 0]])], 64).unwrap();
        assert_eq!(z4.order(), 4);
        assert_eq!(z4.exponent(), 4);
    }

    #[test]
    fn closure_errors() {
        assert_eq!(
            close_group(2, &[int_diag(&[2, 1])], 64).unwrap_err(),
            GroupError::NotInvertible { index: 0 }
        );
        // unipotent matrix generates an infinite group
        assert_eq!(
            close_group(2, &[int_matrix(&[&[1, 1], &[0, 1]])], 50).unwrap_err(),
            GroupError::CapExceeded { cap: 50 }
        );
    }

    #[test]
    fn class_counts() {
        let v4 = close_group(3, &[int_diag(&[1, -1, -1]), int_diag(&[-1, 1, -1])], 64).unwrap();
        assert_eq!(v4.conjugacy_classes().len(), 4);
        let s3 = close_group(3, &[perm3([1, 0, 2]), perm3([1, 2, 0])], 64).unwrap();
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let z4 = close_group(2, &[int_matrix(&[&[0, -1], &[1, 0]])], 64).unwrap();
        assert_eq!(z4.conjugacy_classes().len(), 4);
    }

    #[test]
    fn prime_order_subgroups() {
        assert!(FiniteMatrixGroup::trivial(3).prime_order_elements().is_empty());
        let v4 = close_group(3, &[int_diag(&[1, -1, -1]), int_diag(&[-1, 1, -1])], 64).unwrap();
        assert_eq!(v4.prime_order_elements().len(), 3);
        let z4 = close_group(2, &[int_matrix(&[&[0, -1], &[1, 0]])], 64).unwrap();
        let p = z4.prime_order_elements();
        assert_eq!(p.len(), 1);
        assert_eq!(z4.element(p[0].generator), &int_diag(&[-1, -1]));
    }
}
