//! Exit codes and artifacts of the command-line tool.

use std::path::PathBuf;
use std::process::Command;

use bartnik::io::{corner_json, profile_json};
use bartnik::radial_geometry::flat_exterior;
use bartnik::verify::{ball_corner, neck_profile};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bartnik-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn bartnik(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bartnik")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn inspect_flat_has_zero_curvature_column() {
    let dir = scratch("inspect");
    let input = dir.join("flat.json");
    std::fs::write(&input, profile_json(&flat_exterior(1.0, 100.0, 50).unwrap())).unwrap();
    let (code, out) = bartnik(&["inspect", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("s,r,dr,ddr,R,H,m_H"));
    for l in lines {
        assert_eq!(l.split(',').nth(4).unwrap().parse::<f64>().unwrap(), 0.0);
    }
    let svg = dir.join("m.svg");
    let (code, _) = bartnik(&["inspect", "--input", input.to_str().unwrap(), "--format", "svg", "--output", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn infeasible_minimize_exits_2_with_sentinel() {
    let dir = scratch("minimize");
    let out = dir.join("result.json");
    let (code, _) = bartnik(&[
        "minimize", "--area", "12.566370614359172", "--mean-curvature", "-1", "--budget", "10", "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["mass_estimate"], "+inf");
    assert_eq!(v["feasible"], false);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn feasible_minimize_respects_reference() {
    let (code, out) = bartnik(&[
        "minimize", "--area", "12.566370614359172", "--mean-curvature", "1", "--type", "2", "--condition", "neps:0.01",
        "--budget", "100",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["mass_estimate"].as_f64().unwrap() <= 0.375 + 1e-9);
    assert_eq!(v["upper_bound_check"], true);
}

#[test]
fn horizons_report_all_flags() {
    let dir = scratch("horizons");
    let input = dir.join("neck.json");
    std::fs::write(&input, profile_json(&neck_profile(1.0, 0.1).unwrap())).unwrap();
    let (code, out) = bartnik(&["horizons", "--input", input.to_str().unwrap(), "--epsilon", "0.01"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["conditions"]["outward_minimizing"]["pass"], false);
    assert_eq!(v["conditions"]["no_surrounding_horizons"]["pass"], false);
    assert!(v["outermost_surrounding_horizon"].is_number());
}

#[test]
fn smooth_corner_file() {
    let dir = scratch("smooth");
    let input = dir.join("corner.json");
    std::fs::write(&input, corner_json(&ball_corner(0.1).unwrap())).unwrap();
    let (code, out) = bartnik(&["smooth", "--input", input.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passes"], true);
}

#[test]
fn malformed_input_exits_1_and_precondition_exits_2() {
    let dir = scratch("errors");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema_version": 1, "s": [0, 1]}"#).unwrap();
    assert_eq!(bartnik(&["masses", "--input", bad.to_str().unwrap()]).0, 1);
    assert_eq!(bartnik(&["masses", "--input", dir.join("missing.json").to_str().unwrap()]).0, 1);
    // a cylinder is not asymptotically flat
    let cyl = dir.join("cyl.json");
    std::fs::write(&cyl, profile_json(&bartnik::radial_geometry::cylinder(1.0, 0.0, 50.0, 100).unwrap())).unwrap();
    let (code, out) = bartnik(&["masses", "--input", cyl.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("precondition_failed"));
}

#[test]
fn verify_single_criterion() {
    let (code, out) = bartnik(&["verify", "--only", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("[PASS]"));
}
