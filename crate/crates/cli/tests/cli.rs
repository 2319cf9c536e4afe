use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simproj"))
        .args(args)
        .output()
        .expect("spawn simproj")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn classical_structure_validates() {
    let out = run(&["validate", &fixture("classical4.json")]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn half_matrix_fails_o_projection_with_witness() {
    let out = run(&["validate", &fixture("bad3x3.json")]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("o-projection"))
        .unwrap();
    assert!(line.contains("FAIL"));
    assert!(text.contains("witness: x = "));

    let out = run(&["--json", "validate", &fixture("bad3x3.json")]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    assert_eq!(v["report_version"], 1);
}

#[test]
fn ray_validation_needs_a_seed_and_is_inconclusive() {
    assert_eq!(code(&run(&["validate", &fixture("plane.json")])), 2);
    let out = run(&["--seed", "5", "validate", &fixture("plane.json")]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("sampled-pass"));
}

#[test]
fn malformed_and_missing_inputs_exit_2() {
    let out = run(&["validate", &fixture("malformed.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert_eq!(code(&run(&["validate", "/nonexistent/structure.json"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let asym = dir.path().join("asym.json");
    std::fs::write(
        &asym,
        r#"{"kind": "explicit", "points": ["a", "b"], "matrix": [[1, 0.2], [0.3, 1]]}"#,
    )
    .unwrap();
    let out = run(&["validate", asym.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not symmetric"));
}

#[test]
fn suite_rejects_unknown_ids_and_missing_seed() {
    assert_eq!(code(&run(&["suite", "nope", "--seed", "1"])), 2);
    assert_eq!(code(&run(&["suite", "lattice"])), 2);
}

#[test]
fn lattice_suite_passes_at_scale() {
    let out = run(&[
        "suite", "lattice", "--seed", "7", "--scale", "200", "--json",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v = json(&out);
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["suite"], "lattice");
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["failures"], 0, "{}", c["id"]);
    }
}

#[test]
fn rv_suite_meets_expectation_tolerance() {
    let out = run(&["suite", "rv", "--seed", "7", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let c = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "rv.expectation-identity")
        .unwrap();
    assert!(c["max_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn sigma_suite_matches_powerset() {
    let out = run(&["suite", "sigma", "--seed", "7", "--json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let ids: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["failures"] == 0)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(ids.contains(&"classical.powerset"));
}

#[test]
fn die_expectation_is_three_and_a_half() {
    let out = run(&[
        "--structure",
        &fixture("classical6.json"),
        "--json",
        "rv",
        "expect",
        &fixture("die.json"),
        &fixture("fair_die.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["value"], 3.5);
}

#[test]
fn mixtures_of_two_bases_are_equal() {
    let out = run(&[
        "--structure",
        &fixture("plane.json"),
        "--json",
        "prob",
        "equal",
        &fixture("mixed_axes.json"),
        &fixture("mixed_diagonals.json"),
        "--field",
        &fixture("plane_field.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["equal"], true);
}

#[test]
fn table_measures_are_validated() {
    let plane = fixture("plane.json");
    let ok = run(&[
        "--structure",
        &plane,
        "prob",
        "validate",
        &fixture("table_not_mixture.json"),
        "--seed",
        "1",
    ]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    let bad = run(&[
        "--structure",
        &plane,
        "prob",
        "validate",
        &fixture("table_not_additive.json"),
        "--seed",
        "1",
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("witness: events"));
}

#[test]
fn sigma_generation_on_plane_field() {
    let out = run(&[
        "--structure",
        &fixture("plane.json"),
        "--json",
        "sigma",
        "generate",
        &fixture("plane_field.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["events"].as_array().unwrap().len(), 6);

    let out = run(&[
        "--structure",
        &fixture("plane.json"),
        "sigma",
        "boolean",
        &fixture("plane_field.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("Boolean: false"));
}

#[test]
fn spins_on_different_axes_are_incompatible() {
    let plane = fixture("plane.json");
    let out = run(&[
        "--structure",
        &plane,
        "--json",
        "rv",
        "compatible",
        &fixture("spin0.json"),
        &fixture("spin45.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["compatible"], false);

    let out = run(&[
        "--structure",
        &plane,
        "rv",
        "eval",
        &fixture("spin0.json"),
        "[1,1]",
    ]);
    assert_eq!(stdout(&out).trim(), "undefined");
}

#[test]
fn coplanar_lines_do_not_distribute() {
    let out = run(&[
        "--structure",
        "ray:2",
        "lattice",
        "distributes",
        "[[1,0]]",
        "[[1,1]]",
        "[[0,1]]",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "distributes: false");
}

#[test]
fn sampled_similarity_needs_seed_and_is_reproducible() {
    let args = [
        "--structure",
        "ray:3",
        "sim",
        "subspace",
        "[[1,0,0],[0,1,0]]",
        "[[1,0,0],[0,1,1]]",
    ];
    assert_eq!(code(&run(&args)), 2);
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "9", "--json"]);
    let a = run(&seeded);
    let b = run(&seeded);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}
