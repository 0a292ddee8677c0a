//! End-to-end tests of the icelab binary: exit-code contract, JSON summary
//! schemas, and seeded-determinism of emitted CSV bytes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_icelab")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("icelab-cli-test-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str], out_dir: &PathBuf) -> Output {
    Command::new(bin())
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn verify_ik_passes_and_exits_zero() {
    let dir = scratch("ik");
    let out = run(&["verify", "ik", "--n", "3", "--draws", "20"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["max_rel_err"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["pass"], serde_json::json!(true));
    // manifest exists and carries the config
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("verify_ik_manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["n"], serde_json::json!(3));
    assert!(manifest["version"].as_str().is_some());
}

#[test]
fn tolerance_failure_exits_two() {
    let dir = scratch("tol");
    let out = run(
        &["verify", "ik", "--n", "2", "--draws", "5", "--tol", "1e-30"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], serde_json::json!(false));
}

#[test]
fn usage_error_exits_one() {
    let out = Command::new(bin()).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = Command::new(bin()).args(["verify", "ik"]).output().unwrap(); // missing --n
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_ybe_reports_worst_boundary() {
    let dir = scratch("ybe");
    let out = run(
        &["verify", "ybe", "--u", "0.3", "--v", "0.7", "--t", "0.4", "--draws", "5"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-12);
    assert!(v["worst_boundary"].as_str().is_some());
}

#[test]
fn enum_free_boundary_is_stochastic() {
    let dir = scratch("enum");
    let out = run(
        &[
            "enum", "--bc", "free", "--n", "3", "--x", "0.9,1.1,0.8", "--y", "0.4,0.3,0.5",
            "--t", "0.45", "--w", "0.7",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["Z"]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(v["observables"]["free_observable"]["re"].as_f64().is_some());
}

#[test]
fn enum_lists_configs_in_grid_format() {
    let dir = scratch("list");
    let out = run(
        &["enum", "--bc", "dwbc", "--n", "3", "--x", "0.2,0.3,0.4", "--y", "0.5,0.6,0.7",
          "--t", "0.5", "--list-configs"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("configs.txt")).unwrap();
    // 7 DWBC configurations at n = 3, each a 6VX block with a weight line
    assert_eq!(text.matches("6VX 3 3").count(), 7);
    assert_eq!(text.matches("weight ").count(), 7);
}

#[test]
fn stochastic_sampling_is_seed_deterministic() {
    let dir_a = scratch("det-a");
    let dir_b = scratch("det-b");
    let args = [
        "sample", "stochastic", "--n", "24", "--u", "0.25", "--t", "0.5", "--samples", "40",
        "--seed", "7",
    ];
    let a = run(&args, &dir_a);
    let b = run(&args, &dir_b);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let csv_a = fs::read(dir_a.join("stochastic_heights.csv")).unwrap();
    let csv_b = fs::read(dir_b.join("stochastic_heights.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "same seed must reproduce identical CSV bytes");
    // header is column-stable
    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.starts_with("sample_id,h,standardized\n"));
    assert_eq!(text.lines().count(), 41);

    let c = run(
        &[
            "sample", "stochastic", "--n", "24", "--u", "0.25", "--t", "0.5", "--samples", "40",
            "--seed", "8",
        ],
        &dir_a,
    );
    assert_eq!(c.status.code(), Some(0));
    let csv_c = fs::read(dir_a.join("stochastic_heights.csv")).unwrap();
    assert_ne!(csv_b, csv_c, "different seeds must differ");
}

#[test]
fn env_seed_is_honored() {
    let dir_a = scratch("env-a");
    let dir_b = scratch("env-b");
    let args = ["sample", "stochastic", "--n", "12", "--u", "0.3", "--t", "0.4", "--samples", "10"];
    let a = Command::new(bin())
        .arg("--out-dir")
        .arg(&dir_a)
        .args(args)
        .env("ICELAB_SEED", "4242")
        .output()
        .unwrap();
    let b = Command::new(bin())
        .arg("--out-dir")
        .arg(&dir_b)
        .args(args)
        .env("ICELAB_SEED", "4242")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(
        fs::read(dir_a.join("stochastic_heights.csv")).unwrap(),
        fs::read(dir_b.join("stochastic_heights.csv")).unwrap()
    );
}

#[test]
fn mcmc_emits_long_format_csv() {
    let dir = scratch("mcmc");
    let out = run(
        &[
            "mcmc", "dwbc", "--n", "8", "--weights", "dz:1.5707963267948966", "--samples", "20",
            "--sweeps", "4", "--burnin", "200", "--k", "2", "--seed", "5",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.join("mcmc_corners.csv")).unwrap();
    assert!(text.starts_with("sample_id,j,i,xi,cap_xi,generic\n"));
    // 20 samples x (1 + 2) rows
    assert_eq!(text.lines().count(), 61);
    let v = stdout_json(&out);
    assert!(v["acceptance_rate"].as_f64().unwrap() > 0.0);
}

#[test]
fn rmt_f2_values_are_in_range() {
    let dir = scratch("f2");
    let out = run(&["rmt", "f2", "--s", "-2,0,2"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals.len(), 3);
    let f2_m2 = vals[0]["F2"].as_f64().unwrap();
    assert!((f2_m2 - 0.413224).abs() < 1e-4);
    let text = fs::read_to_string(dir.join("rmt_f2.csv")).unwrap();
    assert!(text.starts_with("s,F2\n"));
}

#[test]
fn contour_oneq_csv_matches_emit_schema() {
    let dir = scratch("oneq");
    let out = run(
        &["contour", "oneq", "--s", "1.0", "--u", "0.25", "--ns", "50,100"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("contour_oneq.csv")).unwrap();
    assert!(text.starts_with("n,scaled_value,limit_value\n"));
    assert_eq!(text.lines().count(), 3);
    let v = stdout_json(&out);
    assert!((v["alpha"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
}
