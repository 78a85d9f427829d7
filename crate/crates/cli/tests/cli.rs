use std::process::{Command, Output};

use serde_json::Value;

fn bandsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bandsim")).args(args).output().expect("bandsim runs")
}

fn error_kind(out: &Output) -> String {
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stderr).expect("error is JSON");
    assert!(v["message"].is_string());
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn identify_names_the_unit_square_and_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p.txt");
    let square = "# knot=square length=4\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n";
    let seeds = String::from_utf8(bandsim(&["sample", "--knot", "4_1", "--samples", "2", "--burn-in", "100", "--sample-interval", "50"]).stdout).unwrap();
    std::fs::write(&input, format!("{square}\n{seeds}")).unwrap();
    let out = bandsim(&["identify", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names[0], "0_1");
    assert_eq!(names.len(), 3);
    assert!(names[1..].iter().all(|&n| n == "4_1" || n == "Unknown"), "{names:?}");
}

#[test]
fn obstruct_reports_every_criterion() {
    let out = bandsim(&["obstruct", "3_1", "T(2,-6)", "--coherent"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["overall"], "NOT_OBSTRUCTED");
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);
    let v: Value = serde_json::from_slice(&bandsim(&["obstruct", "3_1", "T(2,6)", "--coherent"]).stdout).unwrap();
    assert_eq!(v["overall"], "OBSTRUCTED");
}

#[test]
fn failures_are_json_on_stderr() {
    assert_eq!(error_kind(&bandsim(&["obstruct", "3_1", "99_9"])), "unknown_knot");
    assert_eq!(error_kind(&bandsim(&["obstruct", "3_1", "T(2,4)"])), "obstruction");
    assert_eq!(error_kind(&bandsim(&["recombine", "--knot", "3_1"])), "config");
    assert_eq!(error_kind(&bandsim(&["network", "--input", "/nonexistent/log.csv"])), "io");
    assert_eq!(error_kind(&bandsim(&["frobnicate"])), "usage");
    assert_eq!(error_kind(&bandsim(&["--config", "/nonexistent.cfg", "validate-table"])), "io");
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "knot = 3_1\nsamples = 3\nburn_in = 100\nsample_interval = 10\nrng_seed = 5\n").unwrap();
    let from_file = bandsim(&["--config", cfg.to_str().unwrap(), "sample"]);
    let overridden = bandsim(&["--config", cfg.to_str().unwrap(), "sample", "--samples", "1", "--knot", "5_1"]);
    let a = String::from_utf8(from_file.stdout).unwrap();
    let b = String::from_utf8(overridden.stdout).unwrap();
    assert_eq!(a.matches("# knot=3_1 ").count(), 3);
    assert_eq!(b.matches("# knot=5_1 ").count(), 1);
    assert!(a.starts_with("# params ") && a.contains("\"rng_seed\":5"));
}
