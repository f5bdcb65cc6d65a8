//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines always reach stdout.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use crystalkit_core::crystal::cohomology::{cocycle_of, cohomology_module, GroupModule};
use crystalkit_core::crystal::{build_crystal, cohomology, minimal_dimension_search, restriction, SearchConstraint};
use crystalkit_core::dynamics::{
    anosov_scan_with, count_fixed_points, ec_check, fixed_point_data, validate_endo, DEFAULT_SCAN_CAP,
};
use crystalkit_core::exactmath::{int_diag, int_matrix};
use crystalkit_core::ghw::{
    amalgam_split, check_epimorphism, dihedral_quotients, fibonacci_presentation, ghw_enumerate,
    is_rational_homology_sphere, search_fibonacci_epimorphism, EpiVerdict, DEFAULT_CERTIFY_BOUND,
};
use crystalkit_core::groups::close_group;
use crystalkit_core::repanalysis::{out_finite_seeded, IntegralRep, RepError, DEFAULT_SEED};
use crystalkit_core::shell::{
    catalog_entries, catalog_entry, execute, lattice_catalog, random_reps, Command, Format, THREE_DIMENSIONAL,
};
use crystalkit_core::spin::{h1_z2_rank, spin_structures};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn group(name: &str) -> crystalkit_core::crystal::CrystalGroup {
    catalog_entry(name).expect("catalog name").expect("catalog entry builds").group
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_out_finite() -> Outcome {
    let mut reps: Vec<(String, IntegralRep)> = catalog_entries()
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|e| (e.group.name().to_string(), IntegralRep::from_group(e.group.holonomy().clone())))
        .collect();
    let catalog_count = reps.len();
    reps.extend(random_reps(DEFAULT_SEED, 50).map_err(|e| e.to_string())?);
    let mut mismatches = Vec::new();
    let (mut finite, mut infinite) = (0, 0);
    for (name, rho) in &reps {
        ensure(rho.degree() <= 6 && rho.group.order() <= 16, format!("{name} outside the size bounds"))?;
        match out_finite_seeded(rho, DEFAULT_SEED) {
            Ok(r) => {
                let by_rows = r.checklist.iter().all(|x| x.passes);
                let by_blocks = r.blocks.iter().all(|b| b.kind.has_finite_units());
                if by_rows != by_blocks {
                    mismatches.push(name.clone());
                }
                if by_rows {
                    finite += 1;
                } else {
                    infinite += 1;
                }
            }
            Err(RepError::CrossValidationMismatch { .. }) => mismatches.push(name.clone()),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    ensure(mismatches.is_empty(), format!("mismatches: {mismatches:?}"))?;
    Ok(format!("{catalog_count} catalog + 50 random reps, 0 mismatches ({finite} finite, {infinite} infinite)"))
}

fn c2_klein_counterexample() -> Outcome {
    let k = group("klein");
    let e = validate_endo(&k, &int_diag(&[3, 2]), &[BigRational::zero(), BigRational::zero()])
        .map_err(|e| e.to_string())?;
    let fp = fixed_point_data(&k, &e);
    ensure(fp.lefschetz == BigInt::from(-2), format!("L = {}", fp.lefschetz))?;
    ensure(fp.nielsen == BigInt::from(4), format!("N = {}", fp.nielsen))?;
    ensure(!fp.anosov, "N = |L| unexpectedly holds")?;
    // one term per lift: det(I - F) = 2 and det(I - diag(1,-1)F) = -6
    ensure(fp.terms == ints(&[2, -6]), format!("lift terms {:?}", fp.terms))?;
    let brute = count_fixed_points(&k, &e).ok_or("oracle saw a singular lift")?;
    ensure(brute == 4, format!("brute-force count {brute}"))?;
    Ok(format!("L = -2, N = 4, lift terms {:?}, brute-force fixed points {brute}", fp.terms))
}

type ScanTally = (usize, usize, Vec<String>, usize);

// Bound-2 scans already run, so the entropy criterion reuses the odd-order sweep.
static SCANNED: Mutex<Vec<((String, i64), ScanTally)>> = Mutex::new(Vec::new());

fn scan_all(names: &[&str], bound: i64) -> Result<ScanTally, String> {
    let mut total: ScanTally = (0, 0, Vec::new(), 0);
    for name in names {
        let cached = SCANNED.lock().unwrap().iter().find(|((n, b), _)| n == name && *b == bound).map(|(_, t)| t.clone());
        let t = match cached {
            Some(t) => t,
            None => {
                let t = scan_one(name, bound)?;
                SCANNED.lock().unwrap().push(((name.to_string(), bound), t.clone()));
                t
            }
        };
        total.0 += t.0;
        total.1 += t.1;
        total.2.extend(t.2);
        total.3 += t.3;
    }
    Ok(total)
}

fn scan_one(name: &str, bound: i64) -> Result<ScanTally, String> {
    let g = group(name);
    let (mut ec_failures, mut visited) = (Vec::new(), 0);
    let scan = anosov_scan_with(&g, bound, DEFAULT_SCAN_CAP, |e, _| {
        visited += 1;
        if !ec_check(&g, e).holds {
            ec_failures.push(format!("{name}: {:?}", e.linear));
        }
    })
    .map_err(|e| format!("{name}: {e}"))?;
    Ok((scan.valid, scan.counterexamples.len(), ec_failures, visited))
}

const ODD_ORDER: [&str; 3] = ["g3", "z3-dim4", "z5-dim5"];

fn c3_odd_order_anosov() -> Outcome {
    for n in ODD_ORDER {
        let g = group(n);
        ensure(g.holonomy_order() % 2 == 1, format!("{n} has even holonomy"))?;
    }
    let (valid, violations, _, _) = scan_all(&ODD_ORDER, 2)?;
    ensure(violations == 0, format!("{violations} violations of N = |L|"))?;
    Ok(format!("bound 2 on {ODD_ORDER:?}: {valid} valid endos, 0 violations"))
}

fn c4_entropy() -> Outcome {
    let (_, _, mut failures, mut visited) = scan_all(&ODD_ORDER, 2)?;
    for (name, bound) in [("klein", 3), ("t2", 2)] {
        let t = scan_all(&[name], bound)?;
        failures.extend(t.2);
        visited += t.3;
    }
    ensure(failures.is_empty(), format!("ec_check fails on {failures:?}"))?;
    let t2 = group("t2");
    let cat = validate_endo(&t2, &int_matrix(&[&[2, 1], &[1, 1]]), &[BigRational::zero(), BigRational::zero()])
        .map_err(|e| e.to_string())?;
    let r = ec_check(&t2, &cat);
    let want = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let (lhs, rhs) = (r.log_sp.mid(), r.entropy.mid());
    ensure((lhs - want).abs() < 1e-9 && (rhs - want).abs() < 1e-9, format!("cat map: {lhs} vs {rhs}, want {want}"))?;
    Ok(format!("{visited} valid endos checked, cat map log sp = h = {rhs:.12}"))
}

fn c5_ghw() -> Outcome {
    let counts: Vec<usize> =
        (2..=4).map(|n| ghw_enumerate(n, true).map(|v| v.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(counts == vec![0, 1, 0], format!("orientable counts in dims 2..4: {counts:?}"))?;
    let five = ghw_enumerate(5, true).map_err(|e| e.to_string())?;
    ensure(!five.is_empty(), "no dimension-5 groups")?;
    ensure(five.iter().all(is_rational_homology_sphere), "a dimension-5 output is not a rational homology sphere")?;
    Ok(format!("dims 2,3,4 -> {counts:?}; dim 5 -> {} groups, all rational homology spheres", five.len()))
}

fn c6_fibonacci() -> Outcome {
    let hw = group("hw3");
    let p = fibonacci_presentation(2, 6);
    let (fa, ha) = (p.abelianization(), hw.abelianization());
    ensure(fa == ha, format!("F(2,6)^ab = {fa}, HW^ab = {ha}"))?;
    ensure(fa.torsion == ints(&[4, 4]) && fa.free_rank == 0, format!("F(2,6)^ab = {fa}"))?;
    let images = search_fibonacci_epimorphism(2, 6, &hw, DEFAULT_CERTIFY_BOUND, 1 << 16)
        .map_err(|e| e.to_string())?
        .ok_or("bounded search found no epimorphism")?;
    let verdict = check_epimorphism(&p, &hw, &images, DEFAULT_CERTIFY_BOUND).map_err(|e| e.to_string())?;
    ensure(verdict == EpiVerdict::Epi, format!("verdict {verdict:?}"))?;
    Ok(format!("abelianizations {fa} = {ha}; certified epimorphism F(2,6) -> HW"))
}

fn c7_amalgam() -> Outcome {
    let hw = group("hw3");
    let klein = group("klein").fingerprint();
    let epis = dihedral_quotients(&hw);
    ensure(epis.len() == 3, format!("{} dihedral epimorphisms", epis.len()))?;
    for (i, epi) in epis.iter().enumerate() {
        let s = amalgam_split(&hw, epi).map_err(|e| format!("epi {i}: {e}"))?;
        ensure(s.gamma1.fingerprint() == klein, format!("epi {i}: first factor {:?}", s.gamma1.fingerprint()))?;
        ensure(s.gamma2.fingerprint() == klein, format!("epi {i}: second factor {:?}", s.gamma2.fingerprint()))?;
    }
    Ok("3 dihedral epimorphisms, every factor fingerprint-equal to the Klein bottle group".into())
}

fn c8_cohomology() -> Outcome {
    let z2 = close_group(1, &[int_diag(&[-1])], 2).map_err(|e| e.to_string())?;
    let triv = GroupModule::new(&z2, &[int_diag(&[1])]).map_err(|e| e.to_string())?;
    let sign = GroupModule::natural(&z2);
    let h2_triv = cohomology_module(&triv, 2).map_err(|e| e.to_string())?.divisors;
    let h2_sign = cohomology_module(&sign, 2).map_err(|e| e.to_string())?.divisors;
    ensure(h2_triv == ints(&[2]), format!("H2(Z2, Z_triv) = {h2_triv:?}"))?;
    ensure(h2_sign.is_empty(), format!("H2(Z2, Z_sign) = {h2_sign:?}"))?;
    let klein = group("klein");
    let h1_klein = cohomology(klein.holonomy(), 1).map_err(|e| e.to_string())?.divisors;
    ensure(h1_klein == ints(&[2]), format!("H1(Z2, Klein module) = {h1_klein:?}"))?;

    // hand-derived (H1, H2) for every cyclic and Z2xZ2 holonomy in the catalog
    let table: [(&str, &[i64], &[i64]); 11] = [
        ("klein", &[2], &[2]),
        ("g2", &[2, 2], &[2]),
        ("g3", &[3], &[3]),
        ("g4", &[2], &[4]),
        ("g5", &[], &[6]),
        ("b1", &[2], &[2, 2]),
        ("b2", &[], &[2]),
        ("g6", &[2, 2, 2], &[2, 2, 2]),
        ("b3", &[2, 2], &[2, 2, 2, 2]),
        ("z3-dim4", &[3], &[3, 3]),
        ("z5-dim5", &[5], &[5]),
    ];
    for (name, h1, h2) in table {
        let g = group(name);
        for (k, want) in [(1, h1), (2, h2)] {
            let got = cohomology(g.holonomy(), k).map_err(|e| e.to_string())?.divisors;
            ensure(got == ints(want), format!("{name}: H{k} = {got:?}, expected {want:?}"))?;
        }
    }

    let hw = group("hw3");
    let h = hw.holonomy();
    let f = cocycle_of(&hw);
    let involutions: Vec<usize> = (0..h.order()).filter(|&x| x != h.identity()).collect();
    for &x in &involutions {
        let class = restriction(h, &f, &h.subgroup(&[x])).map_err(|e| e.to_string())?;
        ensure(!class.is_zero(), format!("HW class restricts to zero on element {x}"))?;
    }
    Ok(format!(
        "H2(Z2,Z)=Z/2, H2(Z2,Z_sign)=0, H1(Z2,Klein)=Z/2, 11-row table exact, {} HW restrictions nonzero",
        involutions.len()
    ))
}

fn c9_minimal_dimension() -> Outcome {
    let mut found = Vec::new();
    for (name, want) in [("Z2", 2), ("Z3", 3), ("Z2xZ2", 3)] {
        let cat = lattice_catalog(name).ok_or("missing catalog")?;
        let r = minimal_dimension_search(&cat, 5, SearchConstraint::None).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.dimension == want, format!("{name}: dimension {}, expected {want}", r.dimension))?;
        ensure(r.witness.is_torsion_free(), format!("{name}: witness has torsion"))?;
        ensure(r.witness.holonomy_order() == cat.group_order, format!("{name}: witness holonomy order"))?;
        found.push(format!("{name} -> {}", r.dimension));
    }
    Ok(format!("{}, torsion-free witnesses", found.join(", ")))
}

fn c10_spin() -> Outcome {
    for n in 1..=4 {
        let t = build_crystal("t", n, &[], &[], 1).map_err(|e| e.to_string())?;
        let c = spin_structures(&t).map_err(|e| e.to_string())?.count;
        ensure(c == 1 << n, format!("T{n}: {c} structures"))?;
    }
    let mut odd = Vec::new();
    for e in catalog_entries().map_err(|e| e.to_string())? {
        let g = &e.group;
        if g.is_orientable() && g.holonomy_order() % 2 == 1 {
            let c = spin_structures(g).map_err(|e| format!("{}: {e}", g.name()))?.count;
            ensure(c > 0, format!("{} has no spin structure", g.name()))?;
            odd.push(g.name().to_string());
        }
    }
    let hw = group("hw3");
    let count = spin_structures(&hw).map_err(|e| e.to_string())?.count;
    let rank = h1_z2_rank(&hw);
    ensure(count == 1 << rank, format!("HW: {count} structures, rank {rank}"))?;
    Ok(format!("T1..T4 -> 2,4,8,16; odd-order groups {odd:?} nonempty; HW {count} = 2^{rank}"))
}

fn c11_catalog() -> Outcome {
    let groups: Vec<_> = THREE_DIMENSIONAL.iter().map(|n| group(n)).collect();
    ensure(groups.iter().all(|g| g.is_torsion_free()), "a 3-dimensional entry has torsion")?;
    let mut betti: Vec<usize> = groups.iter().map(|g| g.betti1()).collect();
    let listed = betti.clone();
    betti.sort();
    let mut want = vec![3, 1, 1, 1, 1, 0, 2, 2, 1, 1];
    want.sort();
    ensure(betti == want, format!("betti multiset {listed:?}"))?;
    let mut fps: Vec<_> = groups.iter().map(|g| g.fingerprint()).collect();
    fps.sort();
    fps.dedup();
    ensure(fps.len() == 10, format!("{} distinct fingerprints", fps.len()))?;
    Ok(format!("10 torsion-free groups, betti {listed:?}, 10 distinct fingerprints"))
}

fn suite_reports() -> Result<String, String> {
    let mut out = String::new();
    for name in ["klein", "g1", "g2", "g3", "g4", "g5", "g6", "b1", "b2", "b3", "b4", "hw3", "z3-dim4"] {
        let r = execute(&Command::Report { group: name.into() }, vec!["report".into(), name.into()], 0)
            .map_err(|e| e.to_string())?;
        out.push_str(&r.render(Format::Json));
        out.push_str(&r.render(Format::Text));
    }
    for cmd in [
        Command::GhwEnumerate { dim: 3, orientable: true },
        Command::DynamicsScan { group: "klein".into(), bound: 3, cap: DEFAULT_SCAN_CAP },
        Command::Fibonacci { r: 2, n: 6, check_epi: Some("hw3".into()) },
        Command::Search { holonomy: "Z2xZ2".into(), max_dim: 4, mult_free: false },
        Command::CatalogList,
    ] {
        out.push_str(&execute(&cmd, vec![format!("{cmd:?}")], 0).map_err(|e| e.to_string())?.render(Format::Json));
    }
    for (name, rho) in random_reps(0, 50).map_err(|e| e.to_string())? {
        let v = out_finite_seeded(&rho, 0).map_err(|e| e.to_string())?.verdict;
        out.push_str(&format!("{name} {v:?}\n"));
    }
    Ok(out)
}

fn c12_determinism() -> Outcome {
    let a = suite_reports()?;
    let b = suite_reports()?;
    ensure(a == b, "reports differ between runs")?;
    Ok(format!("two runs, {} bytes each, byte-identical", a.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("out_finite cross-validation", c1_out_finite, Duration::from_secs(60)),
        ("Klein bottle Anosov counterexample", c2_klein_counterexample, Duration::from_secs(1)),
        ("odd-order Anosov property", c3_odd_order_anosov, Duration::from_secs(300)),
        ("entropy inequality on affine maps", c4_entropy, Duration::from_secs(300)),
        ("GHW enumeration", c5_ghw, Duration::from_secs(600)),
        ("Fibonacci group epimorphism", c6_fibonacci, Duration::from_secs(120)),
        ("amalgam splitting of HW", c7_amalgam, Duration::from_secs(10)),
        ("cohomology oracle", c8_cohomology, Duration::from_secs(10)),
        ("minimal dimension search", c9_minimal_dimension, Duration::from_secs(60)),
        ("spin structures", c10_spin, Duration::from_secs(120)),
        ("catalog integrity", c11_catalog, Duration::from_secs(10)),
        ("determinism", c12_determinism, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (i, (label, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let verdict = match &outcome {
            Ok(_) if took > *limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            Ok(s) => Ok(s.clone()),
            Err(e) => Err(e.clone()),
        };
        match verdict {
            Ok(s) => println!("acceptance {:>2} PASS  {label}: {s} [{took:.2?}]", i + 1),
            Err(e) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {label}: {e} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
