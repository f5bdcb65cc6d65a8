//! Exact computations for crystallographic and Bieberbach groups: holonomy
//! representations, cohomology, torsion-freeness, representation-theoretic
//! predicates, fixed-point theory of affine self-maps, generalized
//! Hantzsche–Wendt groups and spin structures.

pub mod exactmath;
pub mod groups;
pub mod repanalysis;
pub mod crystal;
pub mod ghw;
pub mod dynamics;
pub mod spin;
pub mod shell;
