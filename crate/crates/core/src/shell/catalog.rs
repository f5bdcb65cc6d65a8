//! Built-in groups, lattice catalogs for the dimension search, and seeded
//! random holonomy representations.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::groupfile::{parse_group_file, GroupFile, ParseError};
use crate::crystal::{build_crystal, crystal_product, CatalogLattice, CrystalError, CrystalGroup, LatticeCatalog};
use crate::exactmath::{int_diag, int_matrix, IntMatrix};
use crate::ghw::ghw_enumerate;
use crate::groups::DEFAULT_ORDER_CAP;
use crate::repanalysis::{IntegralRep, RepError};

const DATA: &[(&str, &str)] = &[
    ("klein", include_str!("../../data/catalog/klein.grp")),
    ("g1", include_str!("../../data/catalog/g1.grp")),
    ("g2", include_str!("../../data/catalog/g2.grp")),
    ("g3", include_str!("../../data/catalog/g3.grp")),
    ("g4", include_str!("../../data/catalog/g4.grp")),
    ("g5", include_str!("../../data/catalog/g5.grp")),
    ("g6", include_str!("../../data/catalog/g6.grp")),
    ("b1", include_str!("../../data/catalog/b1.grp")),
    ("b2", include_str!("../../data/catalog/b2.grp")),
    ("b3", include_str!("../../data/catalog/b3.grp")),
    ("b4", include_str!("../../data/catalog/b4.grp")),
    ("z3-dim4", include_str!("../../data/catalog/z3-dim4.grp")),
    ("z5-dim5", include_str!("../../data/catalog/z5-dim5.grp")),
];

/// Names of the ten three-dimensional flat manifold groups.
pub const THREE_DIMENSIONAL: [&str; 10] = ["g1", "g2", "g3", "g4", "g5", "g6", "b1", "b2", "b3", "b4"];

const GENERATED: &[&str] = &["t1", "t2", "t3", "t4", "t5", "t6", "hw3", "ghw5", "hw3xhw3"];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub file: GroupFile,
    pub group: CrystalGroup,
}

fn metadata(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("metadata literal is an object"),
    }
}

fn torus(n: usize) -> Result<CatalogEntry, CrystalError> {
    let g = build_crystal(&format!("t{n}"), n, &[], &[], 1)?;
    let ab = vec!["Z"; n].join(" + ");
    let meta = metadata(json!({
        "abelianization": ab, "betti1": n, "holonomy_order": 1, "orientable": true, "torsion_free": true
    }));
    Ok(CatalogEntry { file: GroupFile::from_crystal(&g, meta), group: g })
}

fn hw3() -> Result<CatalogEntry, CrystalError> {
    let g = ghw_enumerate(3, true)?.remove(0).with_name("hw3");
    let meta = metadata(json!({
        "abelianization": "Z/4 + Z/4", "betti1": 0, "holonomy_order": 4, "orientable": true, "torsion_free": true
    }));
    Ok(CatalogEntry { file: GroupFile::from_crystal(&g, meta), group: g })
}

fn ghw5() -> Result<Vec<CatalogEntry>, CrystalError> {
    Ok(ghw_enumerate(5, true)?
        .into_iter()
        .enumerate()
        .map(|(i, g)| {
            let g = g.with_name(&format!("ghw5-{}", i + 1));
            let meta = metadata(json!({
                "betti1": 0, "holonomy_order": 16, "orientable": true, "torsion_free": true,
                "note": "orientable GHW group, enumerated up to signed-permutation conjugacy"
            }));
            CatalogEntry { file: GroupFile::from_crystal(&g, meta), group: g }
        })
        .collect())
}

fn hw_square() -> Result<CatalogEntry, CrystalError> {
    let hw = hw3()?.group;
    let g = crystal_product("hw3xhw3", &hw, &hw)?;
    let meta = metadata(json!({
        "abelianization": "Z/4 + Z/4 + Z/4 + Z/4", "betti1": 0, "holonomy_order": 16,
        "orientable": true, "torsion_free": true
    }));
    Ok(CatalogEntry { file: GroupFile::from_crystal(&g, meta), group: g })
}

fn data_entry(text: &str) -> Result<CatalogEntry, CrystalError> {
    let file = parse_group_file(text).expect("bundled group file parses");
    let group = file.build()?;
    Ok(CatalogEntry { file, group })
}

/// Entry names in listing order; "ghw5" expands to every enumerated group.
pub fn catalog_names() -> Vec<String> {
    let mut out: Vec<String> = GENERATED[..7].iter().map(|s| s.to_string()).collect();
    out.extend(DATA.iter().map(|(n, _)| n.to_string()));
    let count = ghw_enumerate(5, true).map_or(0, |v| v.len());
    out.extend((1..=count).map(|i| format!("ghw5-{i}")));
    out.push("hw3xhw3".into());
    out
}

pub fn catalog_entry(name: &str) -> Option<Result<CatalogEntry, CrystalError>> {
    if let Some((_, text)) = DATA.iter().find(|(n, _)| *n == name) {
        return Some(data_entry(text));
    }
    if let Some(n) = name.strip_prefix('t').and_then(|s| s.parse::<usize>().ok()) {
        return (1..=6).contains(&n).then(|| torus(n));
    }
    if let Some(i) = name.strip_prefix("ghw5-").and_then(|s| s.parse::<usize>().ok()) {
        return match ghw5() {
            Ok(mut v) => (i >= 1 && i <= v.len()).then(|| Ok(v.swap_remove(i - 1))),
            Err(e) => Some(Err(e)),
        };
    }
    match name {
        "hw3" => Some(hw3()),
        "hw3xhw3" => Some(hw_square()),
        _ => None,
    }
}

pub fn catalog_entries() -> Result<Vec<CatalogEntry>, CrystalError> {
    let mut out: Vec<CatalogEntry> = (1..=6).map(torus).collect::<Result<_, _>>()?;
    out.push(hw3()?);
    for (_, text) in DATA {
        out.push(data_entry(text)?);
    }
    out.extend(ghw5()?);
    out.push(hw_square()?);
    Ok(out)
}

/// Resolve a group argument: a catalog name, or a path to a `.grp` file.
pub fn load_group(arg: &str) -> Result<CatalogEntry, LoadError> {
    if let Some(e) = catalog_entry(arg) {
        return e.map_err(LoadError::Crystal);
    }
    let stem = std::path::Path::new(arg).file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    if !std::path::Path::new(arg).exists() {
        if let Some(e) = catalog_entry(stem) {
            return e.map_err(LoadError::Crystal);
        }
    }
    let text = std::fs::read_to_string(arg).map_err(|e| LoadError::Io(format!("{arg}: {e}")))?;
    let file = parse_group_file(&text).map_err(LoadError::Parse)?;
    let group = file.build().map_err(LoadError::Crystal)?;
    Ok(CatalogEntry { file, group })
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

fn lattice(name: &str, mats: &[IntMatrix]) -> CatalogLattice {
    CatalogLattice::new(name, mats.to_vec())
}

/// Built-in lattice catalogs: "Z2", "Z3", "Z2xZ2".
pub fn lattice_catalog(name: &str) -> Option<LatticeCatalog> {
    let swap = int_matrix(&[&[0, 1], &[1, 0]]);
    let rot3 = int_matrix(&[&[0, -1], &[1, -1]]);
    let perm3 = int_matrix(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
    match name {
        "Z2" => Some(LatticeCatalog {
            group_name: "Z2".into(),
            group_order: 2,
            num_generators: 1,
            lattices: vec![lattice("trivial", &[int_diag(&[1])]), lattice("sign", &[int_diag(&[-1])]), lattice("regular", &[swap])],
            complete: true,
        }),
        "Z3" => Some(LatticeCatalog {
            group_name: "Z3".into(),
            group_order: 3,
            num_generators: 1,
            lattices: vec![lattice("trivial", &[int_diag(&[1])]), lattice("A2", &[rot3]), lattice("regular", &[perm3])],
            complete: true,
        }),
        "Z2xZ2" => {
            let mut lattices: Vec<CatalogLattice> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .iter()
                .map(|&(a, b)| lattice(&format!("chi({a},{b})"), &[int_diag(&[a]), int_diag(&[b])]))
                .collect();
            lattices.push(lattice("perm(a)", &[swap.clone(), int_diag(&[1, 1])]));
            lattices.push(lattice("perm(b)", &[int_diag(&[1, 1]), swap.clone()]));
            lattices.push(lattice("perm(ab)", &[swap.clone(), swap]));
            Some(LatticeCatalog {
                group_name: "Z2xZ2".into(),
                group_order: 4,
                num_generators: 2,
                lattices,
                complete: false,
            })
        }
        _ => None,
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    name: String,
    matrices: Vec<Vec<Vec<i64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    group: String,
    order: usize,
    generators: usize,
    #[serde(default)]
    complete: bool,
    lattices: Vec<RawLattice>,
}

/// Holonomy file: `{group, order, generators, complete, lattices:[{name, matrices}]}`.
pub fn parse_lattice_catalog(text: &str) -> Result<LatticeCatalog, ParseError> {
    let raw: RawCatalog = serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => ParseError::Schema(e.to_string()),
        _ => ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() },
    })?;
    let mut lattices = Vec::new();
    for l in raw.lattices {
        if l.matrices.len() != raw.generators {
            return Err(ParseError::Semantic(format!(
                "lattice {}: {} matrices for {} generators",
                l.name,
                l.matrices.len(),
                raw.generators
            )));
        }
        let d = l.matrices.first().map_or(0, Vec::len);
        let mut mats = Vec::new();
        for m in &l.matrices {
            if m.len() != d || m.iter().any(|r| r.len() != d) {
                return Err(ParseError::Schema(format!("lattice {}: matrices must be square of one size", l.name)));
            }
            mats.push(IntMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()));
        }
        lattices.push(CatalogLattice::new(&l.name, mats));
    }
    Ok(LatticeCatalog {
        group_name: raw.group,
        group_order: raw.order,
        num_generators: raw.generators,
        lattices,
        complete: raw.complete,
    })
}

/// Irreducible-ish building blocks per small group, one matrix per generator.
fn rep_families() -> Vec<(&'static str, Vec<Vec<IntMatrix>>)> {
    let one = || int_diag(&[1]);
    let neg = || int_diag(&[-1]);
    let swap = int_matrix(&[&[0, 1], &[1, 0]]);
    let rot3 = int_matrix(&[&[0, -1], &[1, -1]]);
    let rot4 = int_matrix(&[&[0, -1], &[1, 0]]);
    let rot6 = int_matrix(&[&[1, -1], &[1, 0]]);
    let refl = int_diag(&[1, -1]);
    let qi = int_matrix(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
    let qj = int_matrix(&[&[0, 0, -1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, -1, 0, 0]]);
    let chars2 = || -> Vec<Vec<IntMatrix>> {
        [(1, 1), (1, -1), (-1, 1), (-1, -1)].iter().map(|&(a, b)| vec![int_diag(&[a]), int_diag(&[b])]).collect()
    };
    vec![
        ("Z2", vec![vec![one()], vec![neg()], vec![swap.clone()]]),
        ("Z3", vec![vec![one()], vec![rot3.clone()]]),
        ("Z4", vec![vec![one()], vec![neg()], vec![rot4.clone()]]),
        ("Z6", vec![vec![one()], vec![neg()], vec![rot3.clone()], vec![rot6]]),
        ("Z2xZ2", chars2()),
        ("S3", vec![vec![one(), one()], vec![one(), neg()], vec![rot3, swap]]),
        ("D4", {
            let mut v = chars2();
            v.push(vec![rot4, refl]);
            v
        }),
        ("Q8", {
            let mut v = chars2();
            v.push(vec![qi, qj]);
            v
        }),
    ]
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-1i64..=1));
        // row operation rᵢ += c·rⱼ
        for k in 0..n {
            let add = &c * &u[(j, k)];
            u[(i, k)] += add;
        }
    }
    u
}

/// Seeded random faithful integral representations of degree ≤ 6 whose
/// image has order ≤ 16, conjugated by a random unimodular matrix.
pub fn random_reps(seed: u64, count: usize) -> Result<Vec<(String, IntegralRep)>, RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let families = rep_families();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (name, blocks) = families.choose(&mut rng).expect("nonempty");
        let target = rng.gen_range(1..=6usize);
        let mut chosen: Vec<&Vec<IntMatrix>> = Vec::new();
        let mut degree = 0;
        for _ in 0..8 {
            let b = blocks.choose(&mut rng).expect("nonempty");
            let d = b[0].rows();
            if degree + d <= target {
                degree += d;
                chosen.push(b);
            }
        }
        if degree == 0 {
            continue;
        }
        let ngens = blocks[0].len();
        let gens: Vec<IntMatrix> = (0..ngens)
            .map(|j| chosen.iter().skip(1).fold(chosen[0][j].clone(), |acc, b| acc.direct_sum(&b[j])))
            .collect();
        let rep = IntegralRep::with_degree(degree, &gens, DEFAULT_ORDER_CAP)?;
        if rep.group.order() <= 1 {
            continue;
        }
        let rep = rep.conjugate(&random_unimodular(&mut rng, degree))?;
        let sig: Vec<String> = chosen.iter().map(|b| b[0].rows().to_string()).collect();
        out.push((format!("rand{}-{name}-[{}]", out.len(), sig.join(",")), rep));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_entries_match_metadata() {
        for (name, text) in DATA {
            let e = data_entry(text).unwrap();
            assert_eq!(e.group.name(), *name);
            assert!(e.file.metadata_mismatches(&e.group).is_empty(), "{name}");
        }
    }

    #[test]
    fn lookup_and_lattices() {
        assert_eq!(catalog_entry("t4").unwrap().unwrap().group.betti1(), 4);
        assert!(catalog_entry("t7").is_none());
        assert!(catalog_entry("nope").is_none());
        for n in ["Z2", "Z3", "Z2xZ2"] {
            let c = lattice_catalog(n).unwrap();
            assert!(c.lattices.iter().all(|l| l.matrices.len() == c.num_generators));
        }
    }

    #[test]
    fn random_reps_are_seeded_and_bounded() {
        let a = random_reps(7, 12).unwrap();
        let b = random_reps(7, 12).unwrap();
        for ((na, ra), (nb, rb)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert_eq!(ra.group.generators(), rb.group.generators());
            assert!(ra.degree() <= 6 && ra.group.order() <= 16);
        }
    }

    #[test]
    fn holonomy_file_format() {
        let text = r#"{"group":"Z2","order":2,"generators":1,"lattices":[{"name":"sign","matrices":[[[-1]]]}]}"#;
        let c = parse_lattice_catalog(text).unwrap();
        assert_eq!(c.lattices[0].dim(), 1);
        assert!(!c.complete);
        let bad = r#"{"group":"Z2","order":2,"generators":2,"lattices":[{"name":"s","matrices":[[[-1]]]}]}"#;
        assert!(matches!(parse_lattice_catalog(bad), Err(ParseError::Semantic(_))));
    }
}
