//! Group files, the built-in catalog, and the commands behind the CLI.
//! Every command returns a [`Report`]; failures carry an exit code.

pub mod catalog;
pub mod groupfile;
pub mod report;

use serde_json::{json, Value};
use thiserror::Error;

pub use catalog::{
    catalog_entries, catalog_entry, catalog_names, lattice_catalog, load_group, parse_lattice_catalog, random_reps,
    CatalogEntry, LoadError, THREE_DIMENSIONAL,
};
pub use groupfile::{parse_group_file, parse_matrix_arg, parse_vector_arg, GroupFile, ParseError};
pub use report::{Format, Provenance, Report};

use crate::crystal::{cohomology, minimal_dimension_search, CrystalError, CrystalGroup, GroupElement, SearchConstraint};
use crate::dynamics::{
    anosov_scan, count_fixed_points, ec_check, fixed_point_data, validate_endo, DynamicsError,
};
use crate::ghw::{
    check_epimorphism, dihedral_quotients, fibonacci_presentation, ghw_enumerate_capped, is_ghw,
    is_rational_homology_sphere, search_fibonacci_epimorphism, EpiVerdict, Presentation, DEFAULT_CERTIFY_BOUND, DEFAULT_GHW_CAP,
};
use crate::groups::GroupError;
use crate::repanalysis::{
    calabi_yau_check, mult_free_check_seeded, out_finite_seeded, IntegralRep, RepError,
};
use crate::spin::{spin_structures, SpinError};
use groupfile::{int_matrix_json, rat_vector_json};
use report::{int_json, ints_json};

pub use crate::dynamics::DEFAULT_SCAN_CAP;

pub const DEFAULT_EPI_CANDIDATES: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze { group: String },
    Cohomology { group: String, degree: usize },
    Search { holonomy: String, max_dim: usize, mult_free: bool },
    GhwEnumerate { dim: usize, orientable: bool },
    Fibonacci { r: usize, n: usize, check_epi: Option<String> },
    DynamicsCheck { group: String, matrix: String, vector: Option<String> },
    DynamicsScan { group: String, bound: i64, cap: usize },
    Spin { group: String },
    CatalogList,
    CatalogShow { name: String },
    Report { group: String },
}

#[derive(Debug, Error)]
pub enum ShellError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("cross-validation failure: {0}")]
    CrossValidation(String),
}

impl ShellError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ShellError::Invalid(_) => 2,
            ShellError::Cap(_) => 3,
            ShellError::CrossValidation(_) => 4,
        }
    }
}

impl From<CrystalError> for ShellError {
    fn from(e: CrystalError) -> Self {
        match e {
            CrystalError::CapExceeded { .. } => ShellError::Cap(e.to_string()),
            _ => ShellError::Invalid(e.to_string()),
        }
    }
}

impl From<LoadError> for ShellError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Crystal(c) => c.into(),
            other => ShellError::Invalid(other.to_string()),
        }
    }
}

impl From<ParseError> for ShellError {
    fn from(e: ParseError) -> Self {
        ShellError::Invalid(e.to_string())
    }
}

impl From<RepError> for ShellError {
    fn from(e: RepError) -> Self {
        match e {
            RepError::CrossValidationMismatch { .. } => ShellError::CrossValidation(e.to_string()),
            RepError::Group(GroupError::CapExceeded { .. }) => ShellError::Cap(e.to_string()),
            _ => ShellError::Invalid(e.to_string()),
        }
    }
}

impl From<DynamicsError> for ShellError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::CapExceeded { .. } => ShellError::Cap(e.to_string()),
            _ => ShellError::Invalid(e.to_string()),
        }
    }
}

impl From<SpinError> for ShellError {
    fn from(e: SpinError) -> Self {
        match e {
            SpinError::DimensionCap { .. } => ShellError::Cap(e.to_string()),
            SpinError::Inconsistent(_) => ShellError::CrossValidation(e.to_string()),
            _ => ShellError::Invalid(e.to_string()),
        }
    }
}

fn element_json(g: &CrystalGroup, e: &GroupElement) -> Value {
    json!({"matrix": int_matrix_json(g.matrix(e.holonomy)), "translation": rat_vector_json(&e.translation)})
}

fn fingerprint_json(g: &CrystalGroup) -> Value {
    let f = g.fingerprint();
    json!({
        "dimension": f.dimension,
        "holonomy_order": f.holonomy_order,
        "orientable": f.orientable,
        "betti1": f.betti1,
        "abelianization": g.abelianization().to_string(),
    })
}

fn holonomy_rep(g: &CrystalGroup) -> IntegralRep {
    IntegralRep::from_group(g.holonomy().clone())
}

fn add_invariants(r: &mut Report, e: &CatalogEntry) -> Result<(), ShellError> {
    let g = &e.group;
    let inv = g.invariants_report();
    r.set("invariants", "name", json!(g.name()));
    r.set("invariants", "dimension", json!(inv.dimension));
    r.set("invariants", "holonomy_order", json!(inv.holonomy_order));
    r.set("invariants", "betti1", json!(inv.betti1));
    r.set("invariants", "center_rank", json!(inv.center_rank));
    r.set("invariants", "orientable", json!(inv.orientable));
    r.set("invariants", "torsion_free", json!(inv.torsion_free));
    r.set("invariants", "abelianization", json!(g.abelianization().to_string()));
    let mismatches = e.file.metadata_mismatches(g);
    r.set("predicates", "metadata_consistent", json!(mismatches.is_empty()));
    if !mismatches.is_empty() {
        return Err(ShellError::CrossValidation(format!("{}: {}", g.name(), mismatches.join("; "))));
    }
    Ok(())
}

fn add_predicates(r: &mut Report, g: &CrystalGroup, seed: u64) -> Result<(), ShellError> {
    let rho = holonomy_rep(g);
    let of = out_finite_seeded(&rho, seed)?;
    r.set("predicates", "out_finite", json!(of.verdict));
    r.set("predicates", "out_finite_checklist_rows", json!(of.checklist.len()));
    r.set("predicates", "out_finite_blocks", json!(of.blocks.iter().map(|b| b.kind).collect::<Vec<_>>()));
    r.set("predicates", "q_multiplicity_free", json!(mult_free_check_seeded(&rho, seed)?));
    if g.dim() == 6 {
        r.set("predicates", "calabi_yau", json!(calabi_yau_check(&rho)?));
    }
    r.set("predicates", "ghw", json!(is_ghw(g)));
    r.set("predicates", "rational_homology_sphere", json!(is_rational_homology_sphere(g)));
    Ok(())
}

fn add_cohomology(r: &mut Report, g: &CrystalGroup, degrees: &[usize]) -> Result<(), ShellError> {
    for &k in degrees {
        let c = cohomology(g.holonomy(), k)?;
        r.set("cohomology", &format!("H{k}"), ints_json(&c.divisors));
        if k == 2 {
            let class = c.class_of_vector_system(g.generator_vectors());
            r.set("cohomology", "extension_class", ints_json(&class.coords));
            r.set("cohomology", "extension_class_zero", json!(class.is_zero()));
        }
    }
    Ok(())
}

fn add_spin(r: &mut Report, g: &CrystalGroup) -> Result<(), ShellError> {
    match spin_structures(g) {
        Err(SpinError::NotOrientable) => {
            r.set("spin", "status", json!("NotOrientable"));
            Ok(())
        }
        Err(e) => Err(e.into()),
        Ok(s) => {
            r.set("spin", "status", json!("Orientable"));
            r.set("spin", "count", json!(s.count));
            r.set("spin", "h1_z2_rank", json!(s.h1_z2_rank));
            r.set("spin", "relations", json!(s.relations.len()));
            r.set("spin", "cross_check", json!(s.cross_check));
            let signs: Vec<Value> = s.lifts.iter().map(|l| json!(l.signs)).collect();
            r.set("spin", "sign_assignments", Value::Array(signs));
            if !s.cross_check {
                return Err(ShellError::CrossValidation(format!(
                    "{} spin structures but rank of H1(Z/2) is {}",
                    s.count, s.h1_z2_rank
                )));
            }
            Ok(())
        }
    }
}

fn load_lattice_catalog(arg: &str) -> Result<crate::crystal::LatticeCatalog, ShellError> {
    if let Some(c) = lattice_catalog(arg) {
        return Ok(c);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| ShellError::Invalid(format!("{arg}: {e}")))?;
    Ok(parse_lattice_catalog(&text)?)
}

/// Run one command. `argv` is echoed into the report.
pub fn execute(cmd: &Command, argv: Vec<String>, seed: u64) -> Result<Report, ShellError> {
    let mut r = Report::new(argv, seed);
    match cmd {
        Command::Analyze { group } => {
            let e = load_group(group)?;
            add_invariants(&mut r, &e)?;
            add_predicates(&mut r, &e.group, seed)?;
            add_spin(&mut r, &e.group)?;
        }
        Command::Report { group } => {
            let e = load_group(group)?;
            add_invariants(&mut r, &e)?;
            add_predicates(&mut r, &e.group, seed)?;
            add_cohomology(&mut r, &e.group, &[1, 2])?;
            add_spin(&mut r, &e.group)?;
            let epis = dihedral_quotients(&e.group);
            r.set("results", "dihedral_epimorphisms", json!(epis.len()));
            r.set("results", "fingerprint", fingerprint_json(&e.group));
        }
        Command::Cohomology { group, degree } => {
            if !(1..=2).contains(degree) {
                return Err(ShellError::Invalid(format!("degree must be 1 or 2, got {degree}")));
            }
            let e = load_group(group)?;
            r.set("invariants", "name", json!(e.group.name()));
            add_cohomology(&mut r, &e.group, &[*degree])?;
        }
        Command::Search { holonomy, max_dim, mult_free } => {
            let cat = load_lattice_catalog(holonomy)?;
            let constraint = if *mult_free { SearchConstraint::QMultFree } else { SearchConstraint::None };
            let res = minimal_dimension_search(&cat, *max_dim, constraint)?;
            r.set("results", "holonomy", json!(cat.group_name));
            r.set("results", "dimension", json!(res.dimension));
            r.set("results", "summands", json!(res.summands));
            r.set("results", "exact", json!(res.exact));
            r.set("results", "undecided", json!(res.undecided));
            r.set("results", "witness", GroupFile::from_crystal(&res.witness, Default::default()).to_json());
            r.set("results", "witness_torsion_free", json!(res.witness.is_torsion_free()));
        }
        Command::GhwEnumerate { dim, orientable } => {
            if *dim < 2 || *dim > 8 {
                return Err(ShellError::Invalid(format!("dimension {dim} outside 2..=8")));
            }
            let groups = ghw_enumerate_capped(*dim, *orientable, DEFAULT_GHW_CAP)?;
            let known: Vec<CatalogEntry> = if *dim == 3 {
                catalog_entries()?.into_iter().filter(|c| c.group.dim() == 3).collect()
            } else {
                Vec::new()
            };
            let rows: Vec<Value> = groups
                .iter()
                .map(|g| {
                    let fp = g.fingerprint();
                    let matches: Vec<&str> =
                        known.iter().filter(|c| c.group.fingerprint() == fp).map(|c| c.group.name()).collect();
                    json!({
                        "name": g.name(),
                        "fingerprint": fingerprint_json(g),
                        "torsion_free": g.is_torsion_free(),
                        "rational_homology_sphere": is_rational_homology_sphere(g),
                        "catalog_matches": matches,
                    })
                })
                .collect();
            r.set("results", "dimension", json!(dim));
            r.set("results", "orientable", json!(orientable));
            r.set("results", "count", json!(groups.len()));
            r.set("results", "groups", Value::Array(rows));
        }
        Command::Fibonacci { r: rr, n, check_epi } => {
            if *rr < 1 || *n <= *rr {
                return Err(ShellError::Invalid(format!("need 1 <= r < n, got r = {rr}, n = {n}")));
            }
            let p = fibonacci_presentation(*rr, *n);
            r.set("results", "relators", json!(p.relators.iter().map(|w| Presentation::format_word(w)).collect::<Vec<_>>()));
            r.set("results", "abelianization", json!(p.abelianization().to_string()));
            if let Some(target) = check_epi {
                let e = load_group(target)?;
                let g = &e.group;
                r.set("results", "target", json!(g.name()));
                r.set("results", "target_abelianization", json!(g.abelianization().to_string()));
                match search_fibonacci_epimorphism(*rr, *n, g, DEFAULT_CERTIFY_BOUND, DEFAULT_EPI_CANDIDATES)? {
                    Some(images) => {
                        let verdict = check_epimorphism(&p, g, &images, DEFAULT_CERTIFY_BOUND)?;
                        r.set("results", "epimorphism", json!(verdict == EpiVerdict::Epi));
                        r.set("results", "images", Value::Array(images.iter().map(|x| element_json(g, x)).collect()));
                        if verdict != EpiVerdict::Epi {
                            return Err(ShellError::CrossValidation(format!(
                                "search returned images that fail certification: {verdict:?}"
                            )));
                        }
                    }
                    None => {
                        r.set("results", "epimorphism", json!(false));
                        r.set("results", "searched_candidates", json!(DEFAULT_EPI_CANDIDATES));
                    }
                }
            }
        }
        Command::DynamicsCheck { group, matrix, vector } => {
            let e = load_group(group)?;
            let g = &e.group;
            let f = parse_matrix_arg(matrix)?;
            if f.rows() != g.dim() {
                return Err(ShellError::Invalid(format!("matrix is {}x{}, group dimension is {}", f.rows(), f.rows(), g.dim())));
            }
            let d = match vector {
                Some(v) => parse_vector_arg(v)?,
                None => vec![num_rational::BigRational::from_integer(0.into()); g.dim()],
            };
            if d.len() != g.dim() {
                return Err(ShellError::Invalid(format!("vector has {} entries, dimension is {}", d.len(), g.dim())));
            }
            let endo = validate_endo(g, &f, &d)?;
            let fp = fixed_point_data(g, &endo);
            r.set("dynamics", "theta", json!(endo.theta));
            r.set("dynamics", "lefschetz", int_json(&fp.lefschetz));
            r.set("dynamics", "nielsen", int_json(&fp.nielsen));
            r.set("dynamics", "anosov_relation", json!(fp.anosov));
            r.set("dynamics", "degenerate", json!(fp.degenerate));
            r.set("dynamics", "terms", ints_json(&fp.terms));
            r.set("dynamics", "fixed_point_classes_oracle", json!(count_fixed_points(g, &endo)));
            let ec = ec_check(g, &endo);
            r.set("dynamics", "log_spectral_radius", json!([ec.log_sp.lo, ec.log_sp.hi]));
            r.set("dynamics", "entropy", json!([ec.entropy.lo, ec.entropy.hi]));
            r.set("dynamics", "entropy_conjecture", json!(ec.holds));
        }
        Command::DynamicsScan { group, bound, cap } => {
            let e = load_group(group)?;
            let g = &e.group;
            let scan = anosov_scan(g, *bound, *cap)?;
            r.set("dynamics", "bound", json!(scan.bound));
            r.set("dynamics", "candidates", json!(scan.candidates));
            r.set("dynamics", "valid", json!(scan.valid));
            r.set("dynamics", "degenerate", json!(scan.degenerate));
            r.set("dynamics", "violations", json!(scan.counterexamples.len()));
            let rows: Vec<Value> = scan
                .counterexamples
                .iter()
                .map(|c| json!({"linear": int_matrix_json(&c.linear), "lefschetz": int_json(&c.lefschetz), "nielsen": int_json(&c.nielsen)}))
                .collect();
            r.set("dynamics", "counterexamples", Value::Array(rows));
        }
        Command::Spin { group } => {
            let e = load_group(group)?;
            r.set("invariants", "name", json!(e.group.name()));
            add_spin(&mut r, &e.group)?;
        }
        Command::CatalogList => {
            let rows: Vec<Value> = catalog_entries()?
                .iter()
                .map(|c| {
                    json!({
                        "name": c.group.name(),
                        "fingerprint": fingerprint_json(&c.group),
                        "metadata_consistent": c.file.metadata_mismatches(&c.group).is_empty(),
                    })
                })
                .collect();
            r.set("results", "count", json!(rows.len()));
            r.set("results", "entries", Value::Array(rows));
        }
        Command::CatalogShow { name } => {
            let e = catalog_entry(name).ok_or_else(|| ShellError::Invalid(format!("no catalog entry named {name:?}")))??;
            r.set("results", "file", e.file.to_json());
            r.set("results", "fingerprint", fingerprint_json(&e.group));
        }
    }
    Ok(r)
}
