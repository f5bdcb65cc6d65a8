use crystalkit_cli::run_command;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = run_command(std::iter::once("crystalkit").chain(args.iter().copied()));
    let v = if out.code == 0 { serde_json::from_str(&out.stdout).expect("json report") } else { Value::Null };
    (out.code, v)
}

fn fixture(name: &str) -> String {
    format!("{}/../core/data/catalog/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn analyze_klein_file() {
    let (code, r) = run(&["analyze", &fixture("klein.grp")]);
    assert_eq!(code, 0);
    assert_eq!(r["invariants"]["betti1"], 1);
    assert_eq!(r["invariants"]["torsion_free"], true);
    assert_eq!(r["predicates"]["out_finite"], "Finite");
    assert_eq!(r["spin"]["status"], "NotOrientable");
    assert_eq!(r["provenance"]["seed"], 0);
}

#[test]
fn klein_scan_lists_the_counterexample() {
    let (code, r) = run(&["dynamics", "scan", "--group", &fixture("klein.grp"), "--bound", "3"]);
    assert_eq!(code, 0);
    let rows = r["dynamics"]["counterexamples"].as_array().unwrap();
    let hit = rows.iter().find(|c| c["linear"] == serde_json::json!([[3, 0], [0, 2]])).expect("diag(3,2) listed");
    assert_eq!(hit["lefschetz"], -2);
    assert_eq!(hit["nielsen"], 4);
}

#[test]
fn ghw_three_is_hw3() {
    let (code, r) = run(&["ghw", "enumerate", "--dim", "3", "--orientable"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["count"], 1);
    let matches = r["results"]["groups"][0]["catalog_matches"].as_array().unwrap();
    assert!(matches.iter().any(|m| m == "hw3"));
}

#[test]
fn dynamics_check_and_spin() {
    let (code, r) = run(&["dynamics", "check", "--group", "klein", "--matrix", "3,0;0,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["dynamics"]["lefschetz"], -2);
    assert_eq!(r["dynamics"]["nielsen"], 4);
    assert_eq!(r["dynamics"]["fixed_point_classes_oracle"], 4);
    assert_eq!(r["dynamics"]["anosov_relation"], false);
    let (code, r) = run(&["spin", "hw3"]);
    assert_eq!(code, 0);
    assert_eq!(r["spin"]["count"], 4);
}

#[test]
fn search_cohomology_fibonacci_catalog() {
    let (_, r) = run(&["search", "--holonomy", "Z3", "--max-dim", "4"]);
    assert_eq!(r["results"]["dimension"], 3);
    let (_, r) = run(&["cohomology", "klein", "--degree", "1"]);
    assert_eq!(r["cohomology"]["H1"], serde_json::json!([2]));
    let (_, r) = run(&["fibonacci", "--r", "2", "--n", "6"]);
    assert_eq!(r["results"]["abelianization"], "Z/4 + Z/4");
    let (_, r) = run(&["catalog", "show", "g6"]);
    assert_eq!(r["results"]["file"]["dimension"], 3);
    let (_, r) = run(&["catalog", "list"]);
    assert!(r["results"]["count"].as_u64().unwrap() >= 20);
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("crystalkit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.grp");
    std::fs::write(&bad, r#"{"name":"x","dimension":1,"generators":[{"matrix":[[-1]],"vector":["1/0"]}]}"#).unwrap();
    assert_eq!(run(&["analyze", bad.to_str().unwrap()]).0, 2);
    let lying = dir.join("lying.grp");
    std::fs::write(
        &lying,
        r#"{"name":"k","dimension":2,"generators":[{"matrix":[[1,0],[0,-1]],"vector":["1/2","0"]}],"metadata":{"betti1":2}}"#,
    )
    .unwrap();
    assert_eq!(run(&["analyze", lying.to_str().unwrap()]).0, 4);
    assert_eq!(run(&["dynamics", "scan", "--group", "g2", "--bound", "2", "--cap", "3"]).0, 3);
    assert_eq!(run(&["analyze", "no-such-group"]).0, 2);
    assert_eq!(run(&["cohomology", "klein", "--degree", "3"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run_command(["crystalkit", "--help"]).code, 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format_and_determinism() {
    let a = run_command(["crystalkit", "report", "hw3", "--format", "text"]);
    let b = run_command(["crystalkit", "report", "hw3", "--format", "text"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.lines().any(|l| l.starts_with("spin.count") && l.ends_with(" 4")));
    let s = run_command(["crystalkit", "--seed", "5", "analyze", "g3"]);
    assert!(s.stdout.contains("\"seed\": 5"));
}
