use std::fs;

use qmlab_cli::execute;
use serde_json::Value;

fn run(args: &[&str]) -> qmlab_cli::Outcome {
    let mut argv = vec!["qmlab"];
    argv.extend_from_slice(args);
    execute(argv)
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("qmlab-cli-test-{}-{name}", std::process::id()))
}

#[test]
fn chsh_at_coplanar_angles() {
    let v = json(&["chsh", "--model", "qm", "--angles-deg", "0,45,90,-45"]);
    let k = v["result"]["K"].as_f64().unwrap();
    assert!((k - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["command"], "chsh");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["params"]["model"], "qm");
}

#[test]
fn chsh_from_vectors_warns_on_unnormalized_axis() {
    let out = run(&["chsh", "--a", "0,0,2", "--b", "1,0,1", "--a2", "1,0,0", "--b2", "-1,0,1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stderr.contains("normalized"), "{}", out.stderr);
}

#[test]
fn accumulation_time_example() {
    let v = json(&["accum", "--threshold-ev", "2.18", "--flux", "3.5e-13", "--area", "1e-18"]);
    let t = v["result"]["time_s"].as_f64().unwrap();
    assert!((t / 9.98e11 - 1.0).abs() < 1e-3, "{t}");
}

#[test]
fn bose_single_packet_counts() {
    let v = json(&["counts", "--stat", "bose", "--g", "1", "--mbar", "1", "--mmax", "5"]);
    let w: Vec<f64> = v["result"]["W"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(w.len(), 6);
    for (m, p) in w.iter().enumerate() {
        assert!((p - 0.5f64.powi(m as i32 + 1)).abs() < 1e-15);
    }
}

#[test]
fn csv_rows_per_count() {
    let out = run(&["--format", "csv", "counts", "--stat", "bose", "--g", "1", "--mbar", "1", "--mmax", "2"]);
    assert_eq!(out.code, 0);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines, ["m,W", "0,0.50000000000000000", "1,0.25000000000000000", "2,0.12500000000000003"]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["nosuchcommand"]).code, 1);
    assert_eq!(run(&["chsh", "--angles-deg", "0,45,90"]).code, 1);
    assert_eq!(run(&["--shards", "0", "sample", "--angles-deg", "0,45"]).code, 1);
    let fermi = run(&["counts", "--stat", "fermi", "--g", "1", "--mbar", "2"]);
    assert_eq!(fermi.code, 2);
    assert!(fermi.stderr.contains("Fermi"), "{}", fermi.stderr);
    assert_eq!(run(&["bell", "--model", "triplet-zero", "--angles-deg", "0,30"]).code, 0);
}

#[test]
fn monte_carlo_output_is_reproducible() {
    let args = ["--seed", "5", "--shards", "3", "sample", "--model", "qm", "--angles-deg", "0,60", "--pairs", "20000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["shards"], 3);
    assert!(a.stdout.contains("band"));
}

#[test]
fn config_supplies_flags_and_flags_win() {
    let path = temp_path("cfg.json");
    fs::write(&path, r#"{"seed": 9, "model": "sc", "angles_deg": [0, 45, 90, -45]}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["--config", p, "chsh"]);
    assert_eq!(v["seed"], 9);
    assert!((v["result"]["K"].as_f64().unwrap() - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    let v = json(&["--config", p, "chsh", "--model", "qm"]);
    assert_eq!(v["params"]["model"], "qm");
    fs::remove_file(&path).unwrap();
}

#[test]
fn config_rejects_unknown_keys() {
    let path = temp_path("bad.json");
    fs::write(&path, r#"{"colour": "blue"}"#).unwrap();
    let out = run(&["--config", path.to_str().unwrap(), "chsh"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("colour"), "{}", out.stderr);
    fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["--config", path.to_str().unwrap(), "chsh"]).code, 1);
    fs::remove_file(&path).unwrap();
}

#[test]
fn out_flag_writes_file() {
    let path = temp_path("out.csv");
    let out = run(&["--format", "csv", "--out", path.to_str().unwrap(), "vonlaue"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("key,value"), "{text}");
    fs::remove_file(&path).unwrap();
}

#[test]
fn quick_regress_passes() {
    let v = json(&["regress", "--quick"]);
    assert_eq!(v["result"]["failed"], 0);
}

#[test]
fn every_subcommand_runs_with_defaults() {
    for args in [
        vec!["lhv", "--models", "5", "--settings", "5"],
        vec!["nosignal", "--trials", "10"],
        vec!["reduce", "--amplitudes", "0.6,0.8", "--draws", "100"],
        vec!["condspace"],
        vec!["actionprob", "--points", "2001", "--sigma", "10"],
        vec!["packet", "spread"],
        vec!["packet", "coherence"],
        vec!["packet", "sterngerlach"],
        vec!["cavity", "--bins", "20"],
        vec!["balance", "--trials", "100"],
        vec!["vonlaue"],
    ] {
        let out = run(&args);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        let _: Value = serde_json::from_str(&out.stdout).unwrap();
    }
}
