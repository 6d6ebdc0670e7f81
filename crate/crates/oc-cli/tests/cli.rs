use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oc_geometry::kleinian::make_loxodromic;
use oc_geometry::siegel::BoundaryPoint;
use oc_geometry::{HPoint, Octonion};
use serde_json::Value;

fn ocgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocgeo")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn json_file(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn csv(dir: &Path, name: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(dir.join(name)).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn algebra_suite_passes() {
    let out = ocgeo(&["--cmd", "verify-algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["max_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["checks"][0]["cases"], 512);
}

#[test]
fn flipped_table_fails_with_the_identity_named() {
    let out = ocgeo(&["--cmd", "verify-algebra", "--flip-triple", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("identity failed: basis associators"), "{err}");
}

#[test]
fn constant_is_converged_and_deterministic() {
    let a = ocgeo(&["--cmd", "compute-cq", "--mc-samples", "200000"]);
    assert_eq!(a.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["relative_change"].as_f64().unwrap() <= 1e-8);
    assert!(v["monte_carlo"]["sigmas"].as_f64().unwrap() <= 3.0);
    assert_eq!(v["history"].as_array().unwrap().len(), 3);
    let b = ocgeo(&["--cmd", "compute-cq", "--mc-samples", "200000"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unconverged_constant_is_a_numerical_failure() {
    let out = ocgeo(&["--cmd", "compute-cq", "--nodes", "16", "--tolerance", "1e-15", "--mc-samples", "1000"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cylinder_grid_matches_its_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = ocgeo(&["--cmd", "curvature", "--field", "cylinder", "--points", "10", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(dir.path(), "curvature.csv");
    assert_eq!(rows.len(), 10);
    let want = column(&h, &rows, "s_reference");
    for route in ["s_exp", "s_yamabe", "s_connection"] {
        for (g, w) in column(&h, &rows, route).iter().zip(&want) {
            assert!((g - w).abs() <= 1e-6 * w.abs());
        }
    }
    // Full precision: 17 significant digits in scientific notation.
    let mantissa = rows[0][15].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17);
    let meta = json_file(dir.path(), "curvature.json");
    assert_eq!(meta["seed"], 7);
    assert!(meta["fd"].is_object());
}

#[test]
fn constant_field_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let out = ocgeo(&["--cmd", "curvature", "--field", "constant", "--points", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let (h, rows) = csv(dir.path(), "curvature.csv");
    for route in ["s_exp", "s_yamabe", "s_connection"] {
        assert!(column(&h, &rows, route).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn bump_routes_agree() {
    for seed in ["1", "2", "3"] {
        let dir = tempfile::tempdir().unwrap();
        let out = ocgeo(&["--cmd", "curvature", "--seed", seed, "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let (h, rows) = csv(dir.path(), "curvature.csv");
        assert!(column(&h, &rows, "delta_exp_yamabe").iter().all(|v| *v <= 1e-6));
        assert!(column(&h, &rows, "delta_exp_connection").iter().all(|v| *v <= 1e-3));
    }
}

#[test]
fn cyclic_group_has_small_exponent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("cyclic.json");
    let out = ocgeo(&["--cmd", "schottky", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_file(dir.path(), "schottky.json");
    assert!(v["delta_hat"].as_f64().unwrap() <= 0.5);
    assert_eq!(v["orbit_points"], 2000);
}

#[test]
fn two_generator_group_is_positively_curved() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("two_generator.json");
    let out = ocgeo(&["--cmd", "schottky", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_file(dir.path(), "schottky.json");
    assert_eq!(v["sign_summary"]["positive"], 10);
    let (h, rows) = csv(dir.path(), "schottky.csv");
    assert!(column(&h, &rows, "s").iter().all(|s| *s > 0.0));
    let m = json_file(dir.path(), "measure.json");
    let total: f64 = m["atoms"].as_array().unwrap().iter().map(|a| a["m"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(m["atoms"][0]["zeta"].as_array().unwrap().len(), 15);
}

#[test]
fn bundled_generators_are_the_documented_loxodromics() {
    let on_axis = |i: usize, s: f64| HPoint::new(Octonion::basis(i).scale(s), Octonion::ZERO);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(config("two_generator.json")).unwrap()).unwrap();
    let words: Vec<oc_geometry::conformal::GroupWord> = serde_json::from_value(v["generators"].clone()).unwrap();
    for (i, w) in words.iter().enumerate() {
        let want = make_loxodromic(&on_axis(i, 1.0), &BoundaryPoint::Finite(on_axis(i, -1.0)), 0.1).unwrap();
        assert_eq!(w, &want);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"generators": [], "word_length": 3}"#).unwrap();
    for args in [
        vec!["--cmd", "schottky", "--config", bad.to_str().unwrap()],
        vec!["--cmd", "schottky"],
        vec!["--cmd", "schottky", "--config", "/nonexistent.json"],
        vec!["--cmd", "nonsense"],
        vec!["--cmd", "curvature", "--fd-step", "-1"],
    ] {
        assert_eq!(ocgeo(&args).status.code(), Some(2), "{args:?}");
    }
    std::fs::write(&bad, r#"{"generators": [], "word_length": 3, "s_margin": 0.1}"#).unwrap();
    assert_eq!(ocgeo(&["--cmd", "schottky", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}
