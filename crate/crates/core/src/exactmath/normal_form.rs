//! Smith and Hermite normal forms over Z, and integer linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::{IntMatrix, IntVector, Matrix};

/// `u * a * v == d` with `d` diagonal, `d[0] | d[1] | ...`, all `>= 0`.
#[derive(Clone, Debug)]
pub struct SmithResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithResult {
    /// Diagonal entries of `d` (length `min(rows, cols)`).
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|d| !d.is_zero()).count()
    }
}

/// `h == u * a`, `h` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteResult {
    pub u: IntMatrix,
    pub h: IntMatrix,
    pub pivots: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Smith,
    Hermite,
}

#[derive(Clone, Debug)]
pub enum CanonicalForm {
    Smith(SmithResult),
    Hermite(HermiteResult),
}

pub fn canonical_forms(a: &IntMatrix, kind: FormKind) -> CanonicalForm {
    match kind {
        FormKind::Smith => CanonicalForm::Smith(smith(a)),
        FormKind::Hermite => CanonicalForm::Hermite(hermite(a)),
    }
}

pub fn smith(a: &IntMatrix) -> SmithResult {
    let (u, d, v) = smith_impl(a.clone(), true, true);
    SmithResult { u: u.unwrap(), d, v: v.unwrap() }
}

/// Elementary divisors only (no transforms).
pub fn smith_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let (_, d, _) = smith_impl(a.clone(), false, false);
    (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect()
}

fn smith_impl(
    mut a: IntMatrix,
    track_u: bool,
    track_v: bool,
) -> (Option<IntMatrix>, IntMatrix, Option<IntMatrix>) {
    let (m, n) = (a.rows(), a.cols());
    let mut u = track_u.then(|| IntMatrix::identity(m));
    let mut v = track_v.then(|| IntMatrix::identity(n));

    for t in 0..m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let k = -q;
                a.add_row_multiple(i, t, &k);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &k);
                }
                if !a[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let k = -q;
                a.add_col_multiple(j, t, &k);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &k);
                }
                if !a[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pi);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(t, pi);
                }
                a.swap_cols(t, pj);
                if let Some(v) = v.as_mut() {
                    v.swap_cols(t, pj);
                }
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = a[(t, t)].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    (u, a, v)
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut cur = a[(t, t)].abs();
    for i in t + 1..a.rows() {
        let x = a[(i, t)].abs();
        if !x.is_zero() && (cur.is_zero() || x < cur) {
            cur = x;
            best = (i, t);
        }
    }
    for j in t + 1..a.cols() {
        let x = a[(t, j)].abs();
        if !x.is_zero() && (cur.is_zero() || x < cur) {
            cur = x;
            best = (t, j);
        }
    }
    best
}

pub fn hermite(a: &IntMatrix) -> HermiteResult {
    hermite_impl(a.clone(), true)
}

fn hermite_impl(mut h: IntMatrix, track: bool) -> HermiteResult {
    let (m, n) = (h.rows(), h.cols());
    let mut u = if track { IntMatrix::identity(m) } else { IntMatrix::zeros(0, 0) };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            // smallest nonzero in column c at or below r
            let Some(p) = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()))
            else {
                break;
            };
            h.swap_rows(r, p);
            if track {
                u.swap_rows(r, p);
            }
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let k = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &k);
                if track {
                    u.add_row_multiple(i, r, &k);
                }
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            if track {
                u.negate_row(r);
            }
        }
        let p = h[(r, c)].clone();
        for i in 0..r {
            let k = -h[(i, c)].div_floor(&p);
            if !k.is_zero() {
                h.add_row_multiple(i, r, &k);
                if track {
                    u.add_row_multiple(i, r, &k);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    HermiteResult { u, h, pivots }
}

/// Hermite form of the lattice spanned by `rows`, zero rows dropped.
pub fn lattice_basis(rows: &[IntVector], dim: usize) -> Vec<IntVector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(rows.to_vec());
    debug_assert_eq!(m.cols(), dim);
    let res = hermite_impl(m, false);
    (0..res.pivots.len()).map(|i| res.h.row(i).to_vec()).collect()
}

/// Basis of the kernel lattice `{x in Z^n : A x = 0}`, in Hermite form.
pub fn kernel_basis(a: &IntMatrix) -> Vec<IntVector> {
    let n = a.cols();
    if a.rows() == 0 {
        return (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
    }
    let res = hermite_impl(a.transpose(), true);
    let rank = res.pivots.len();
    let raw: Vec<IntVector> = (rank..n).map(|i| res.u.row(i).to_vec()).collect();
    lattice_basis(&raw, n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerSolution {
    pub particular: IntVector,
    pub kernel: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("right-hand side is not in the image lattice")]
    NoSolution,
    #[error("dimension mismatch: matrix has {rows} rows, vector has {len} entries")]
    DimensionMismatch { rows: usize, len: usize },
}

/// All integer solutions of `A x = b`: one particular solution plus a basis
/// of the kernel lattice.
pub fn solve_integer_linear(a: &IntMatrix, b: &[BigInt]) -> Result<IntegerSolution, SolveError> {
    if a.rows() != b.len() {
        return Err(SolveError::DimensionMismatch { rows: a.rows(), len: b.len() });
    }
    let SmithResult { u, d, v } = smith(a);
    let ub = u.mul_vec(b);
    let n = a.cols();
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        let di = if i < n { d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c.is_zero() {
                return Err(SolveError::NoSolution);
            }
        } else {
            let (q, r) = c.div_rem(&di);
            if !r.is_zero() {
                return Err(SolveError::NoSolution);
            }
            y[i] = q;
        }
    }
    let particular = v.mul_vec(&y);
    Ok(IntegerSolution { particular, kernel: kernel_basis(a) })
}

/// True when `A x = b` has an integer solution.
pub fn has_integer_solution(a: &IntMatrix, b: &[BigInt]) -> bool {
    solve_integer_linear(a, b).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::matrix::{int, int_diag, int_matrix};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn smith_two_by_two() {
        let a = int_matrix(&[&[2, 4], &[6, 8]]);
        let s = smith(&a);
        assert_eq!(s.divisors(), ints(&[2, 4]));
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
    }

    #[test]
    fn smith_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(smith(&i3).d, i3);
        let z = IntMatrix::zeros(2, 2);
        assert!(smith(&z).d.is_zero());
    }

    #[test]
    fn hermite_conventions() {
        let a = int_matrix(&[&[3, 5, 1], &[4, -2, 7], &[0, 6, 2]]);
        let h = hermite(&a);
        assert_eq!(&h.u * &a, h.h);
        assert!(h.u.is_unimodular());
        for (r, &c) in h.pivots.iter().enumerate() {
            let p = &h.h[(r, c)];
            assert!(p.is_positive());
            for i in 0..r {
                assert!(!h.h[(i, c)].is_negative() && &h.h[(i, c)] < p);
            }
            for i in r + 1..a.rows() {
                assert!(h.h[(i, c)].is_zero());
            }
        }
    }

    #[test]
    fn solve_examples() {
        let a = int_diag(&[2, 0]);
        assert_eq!(solve_integer_linear(&a, &ints(&[1, 0])), Err(SolveError::NoSolution));
        let s = solve_integer_linear(&a, &ints(&[2, 0])).unwrap();
        assert_eq!(s.particular, ints(&[1, 0]));
        assert_eq!(s.kernel, vec![ints(&[0, 1])]);

        let a = int_matrix(&[&[1, 1], &[1, 1]]);
        let s = solve_integer_linear(&a, &ints(&[3, 3])).unwrap();
        assert_eq!(a.mul_vec(&s.particular), ints(&[3, 3]));
        assert_eq!(s.particular, ints(&[3, 0]));
        assert_eq!(s.kernel, vec![ints(&[1, -1])]);
    }

    #[test]
    fn kernel_of_full_rank_is_empty() {
        assert!(kernel_basis(&int_matrix(&[&[1, 2], &[3, 4]])).is_empty());
    }

    #[test]
    fn dimension_mismatch_reported() {
        let a = int_diag(&[1, 1]);
        assert!(matches!(
            solve_integer_linear(&a, &ints(&[1])),
            Err(SolveError::DimensionMismatch { .. })
        ));
    }
}
