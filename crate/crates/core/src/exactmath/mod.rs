//! Exact integer and rational linear algebra, and polynomial factorization
//! over Q. Everything is arbitrary precision.

pub mod factor;
pub mod matrix;
pub mod normal_form;
pub mod poly;
pub mod roots;

pub use factor::{factor_rational_poly, is_irreducible, rational_roots};
pub use matrix::{
    int, int_diag, int_matrix, is_integral, rat, reduce_mod_one, to_int, to_rat, IntMatrix, IntVector, Matrix,
    RatMatrix, RatVector, Ring,
};
pub use normal_form::{
    canonical_forms, hermite, kernel_basis, lattice_basis, smith, smith_divisors,
    solve_integer_linear, CanonicalForm, FormKind, HermiteResult, IntegerSolution, SmithResult,
    SolveError,
};
pub use poly::{charpoly, cyclotomic, minpoly, RatPoly};
pub use roots::{certified_roots, log_mahler_measure, max_root_modulus, CirclePosition, Enclosure, RootEnclosure};
