//! End-to-end tests against the built binary: outputs, formats, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn write_file(dir: &std::path::Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dirichlet-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(args)
        .env_remove("DIRICHLET_ENUM_CAP")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_dirichlet_prints_cardinality() {
    let dir = tempdir("eval");
    let b23 = write_file(&dir, "b23.json", r#"{"fibers":[2,3]}"#);
    let out = run(&["eval-dirichlet", "--bundle", b23.to_str().unwrap(), "--size", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "13\n");
    // All presentations print the same number.
    for method in ["sum", "hom", "limit", "pullback", "slice"] {
        let out = run(&["eval-dirichlet", "--bundle", b23.to_str().unwrap(), "--size", "2", "--method", method]);
        assert_eq!(stdout(&out), "13\n", "method {method}");
    }
    let out = run(&["eval-poly", "--bundle", b23.to_str().unwrap(), "--size", "2", "--method", "composite"]);
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn series_golden_and_machine_form() {
    let dir = tempdir("series");
    let b233 = write_file(&dir, "b233.json", r#"{"fibers":[2,3,3]}"#);
    let out = run(&["series", "--bundle", b233.to_str().unwrap(), "--kind", "dirichlet"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2^X + 2·3^X\n");

    let out = run(&["series", "--bundle", b233.to_str().unwrap(), "--kind", "dirichlet", "--format", "machine"]);
    let series = write_file(&dir, "series.json", stdout(&out).trim());
    let out = run(&["eval-series", "--series", series.to_str().unwrap(), "--at", "2"]);
    assert_eq!(stdout(&out), "22\n");
}

#[test]
fn enum_maps_counts() {
    let dir = tempdir("enum");
    let src = write_file(&dir, "src.json", r#"{"fibers":[2]}"#);
    let dst = write_file(&dir, "dst.json", r#"{"fibers":[1,3]}"#);
    let out = run(&["enum-maps", "--src", src.to_str().unwrap(), "--dst", dst.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().next(), Some("10"));
    let out = run(&["enum-nats", "--src", src.to_str().unwrap(), "--dst", dst.to_str().unwrap()]);
    assert_eq!(stdout(&out).lines().next(), Some("10"));
    let out = run(&["enum-maps", "--src", src.to_str().unwrap(), "--dst", dst.to_str().unwrap(), "--variant", "contravariant"]);
    assert_eq!(stdout(&out).lines().next(), Some("10"));
}

#[test]
fn exit_codes() {
    let dir = tempdir("exit");
    let b23 = write_file(&dir, "b23.json", r#"{"fibers":[2,3]}"#);

    // 2: malformed input, naming the file.
    let missing = dir.join("missing.json");
    let out = run(&["eval-dirichlet", "--bundle", missing.to_str().unwrap(), "--size", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.json"));

    let bad = write_file(&dir, "bad.json", r#"{"fiber_sizes":[2,3]}"#);
    let out = run(&["eval-dirichlet", "--bundle", bad.to_str().unwrap(), "--size", "2"]);
    assert_eq!(out.status.code(), Some(2));

    // 1: a failed verification, with the counterexample on stdout.
    let non_commuting = write_file(
        &dir,
        "bad_map.json",
        r#"{"src":{"fibers":[2]},"dst":{"fibers":[1,3]},"base_map":[0],"total_map":[1,2]}"#,
    );
    let out = run(&["check", "--property", "commutes", "--map", non_commuting.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("does not commute"));

    // 3: enumeration cap exceeded, via the environment override.
    let out = Command::new(env!("CARGO_BIN_EXE_dirichlet"))
        .args(["enum-maps", "--src", b23.to_str().unwrap(), "--dst", b23.to_str().unwrap()])
        .env("DIRICHLET_ENUM_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_and_factor_round() {
    let dir = tempdir("check");
    let map = write_file(
        &dir,
        "map.json",
        r#"{"src":{"fibers":[2]},"dst":{"fibers":[1,3]},"base_map":[1],"total_map":[1,2]}"#,
    );
    let out = run(&["check", "--property", "naturality", "--map", map.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["check", "--property", "cartesian", "--map", map.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["factor", "--map", map.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cartesian"]["base_map"], serde_json::json!([1]));
}

#[test]
fn compose_pd_and_adjoints() {
    let dir = tempdir("compose");
    let b2 = write_file(&dir, "b2.json", r#"{"fibers":[2]}"#);
    let out = run(&["compose-pd", "--poly", b2.to_str().unwrap(), "--dirichlet", b2.to_str().unwrap()]);
    assert_eq!(stdout(&out), "{\"fibers\":[4]}\n");

    let b020 = write_file(&dir, "b020.json", r#"{"fibers":[0,2,0]}"#);
    let out = run(&["adjoints", "--bundle", b020.to_str().unwrap(), "--format", "machine"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["zc"]["inclusion"], serde_json::json!([0, 2]));
}

#[test]
fn adjunction_check_exit_codes() {
    let out = run(&["adjunction-check", "--pair", "dom-bangdown", "--max-size", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["adjunction-check", "--pair", "zc-bangup", "--max-size", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("vs"));
}

#[test]
fn verify_suite_at_size_two() {
    let out = run(&["verify", "--max-size", "2"]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
