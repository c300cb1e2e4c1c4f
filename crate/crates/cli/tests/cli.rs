use std::path::PathBuf;
use std::process::{Command, Output};

use phiform::expr::ZeroVerdict;
use phiform::report::Report;

fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phiform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Report) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let r = Report::from_json(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    assert_eq!(
        r.to_json(),
        stdout,
        "report JSON must round-trip byte for byte"
    );
    (out.status.code().unwrap(), r)
}

#[test]
fn plane_wave_passes_every_formulation() {
    let path = corpus("fields/planewave.json");
    let (code, r) = report(&["check-maxwell", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.entries.len(), 8);
    assert!(r
        .entries
        .iter()
        .all(|e| e.verdict == ZeroVerdict::SymbolicZero));
    assert_eq!(r.input_digest.len(), 64);
}

#[test]
fn broken_field_exits_one_with_a_witness() {
    let path = corpus("fields/shear-broken.json");
    let (code, r) = report(&["check-maxwell", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let witnessed = r
        .entries
        .iter()
        .filter(|e| matches!(e.verdict, ZeroVerdict::NonZero { witness: Some(_) }))
        .count();
    assert!(witnessed > 0);
}

#[test]
fn numeric_only_keeps_the_exit_code() {
    for (file, want) in [
        ("fields/planewave.json", 0),
        ("fields/shear-broken.json", 1),
    ] {
        let path = corpus(file);
        let (code, r) = report(&["--numeric-only", "check-maxwell", path.to_str().unwrap()]);
        assert_eq!(code, want, "{file}");
        assert_eq!(r.entries.len(), 8);
    }
}

#[test]
fn boost_is_a_symmetry() {
    let path = corpus("vector_fields/boost_x.json");
    let (code, r) = report(&["symmetry", "--field", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.entries.len(), 13);
    let path = corpus("vector_fields/shear_x_dy.json");
    let (code, _) = report(&["symmetry", "--field", path.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn eed_reports_the_invariants() {
    let path = corpus("fields/constant_crossed.json");
    let (code, r) = report(&["check-eed", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r.values["I1"], "0");
    assert_eq!(r.entries.len(), 11);
}

#[test]
fn dualize_preserves_the_solution() {
    let path = corpus("fields/planewave_oblique.json");
    let (code, r) = report(&["dualize", path.to_str().unwrap(), "--alpha", "0.3"]);
    assert_eq!(code, 0);
    assert_eq!(r.values["alpha"], "3/10");
    assert!(r
        .entries
        .iter()
        .any(|e| e.residual == "invariants.sum_of_squares"));
}

#[test]
fn flows() {
    let (code, r) = report(&[
        "flows",
        "--family",
        "special-conformal",
        "--param",
        "1,0,0,0",
        "--point",
        "0,0,0,2",
    ]);
    assert_eq!(code, 3, "the orbit crosses the singular locus");
    assert_eq!(r.values["image"], "(-4/3, 0, 0, -2/3)");
    let (code, r) = report(&[
        "flows", "--family", "boost-z", "--param", "0.5", "--point", "0,1,-2,3",
    ]);
    assert_eq!(code, 0);
    assert!(matches!(
        r.entries[0].verdict,
        ZeroVerdict::NumericZero { .. }
    ));
    let out = run(&[
        "flows",
        "--family",
        "special-conformal",
        "--param",
        "1,0,0,0",
        "--point",
        "0,0,0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
}

#[test]
fn wave_check() {
    let (code, _) = report(&["wave-check", "--u", "cos(x - xi)*exp(y)*sin(y)"]);
    assert_eq!(code, 1);
    let (code, r) = report(&["wave-check", "--u", "sin(3*(z + xi))"]);
    assert_eq!(code, 0);
    assert!(r.entries.iter().all(|e| e.verdict.is_zero()));
}

#[test]
fn metric_table_matches_golden() {
    let out = run(&["metric-table"]);
    assert!(out.status.success());
    let golden = include_str!("golden/metric_table.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(
        run(&["check-maxwell", "/nonexistent/field.json"])
            .status
            .code(),
        Some(2)
    );
    let dir = std::env::temp_dir().join(format!("phiform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"E": ["x +", "0", "0"], "B": ["0", "0", "0"]}"#).unwrap();
    let out = run(&["check-maxwell", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E[0]"));
    assert_eq!(
        run(&["dualize", bad.to_str().unwrap(), "--alpha", "beta"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
