use std::path::Path;
use std::process::{Command, Output};

fn cutcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutcat")).args(args).env_remove("CUTCAT_OUT_DIR").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bound_at_zero() {
    let out = cutcat(&["bound", "--gamma", "10", "--t", "2", "--p", "0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "0");
    assert_eq!(code(&cutcat(&["bound", "--gamma", "10", "--t", "2", "--p", "1.5"])), 2);
}

#[test]
fn verify_exit_codes() {
    let out = cutcat(&["verify", "--gamma", "10", "--distance", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["pass"], true);
    // weight-2 faults defeat a distance-3 gadget
    let out = cutcat(&["verify", "--gamma", "6", "--distance", "3", "--max-weight", "2"]);
    assert_eq!(code(&out), 1);
    assert!(stdout_json(&out)["counterexample"]["locations"].as_array().unwrap().len() <= 2);
    assert_eq!(code(&cutcat(&["verify", "--gamma", "10", "--distance", "4"])), 2);
    assert_eq!(code(&cutcat(&["verify", "--gamma", "18", "--distance", "9", "--decoder", "rules"])), 2);
    assert_eq!(code(&cutcat(&["verify", "--gamma", "10"])), 2);
}

#[test]
fn resources_json() {
    let out = cutcat(&["resources", "--scheme", "cutcat", "--gamma", "18", "--distance", "9"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["two_qubit_gates"]["min"], 70);
    assert_eq!(v["depth"]["max"], 20);
    let out = cutcat(&["resources", "--scheme", "fullcat", "--gamma", "14", "--distance", "7", "--ideal-prep"]);
    assert_eq!(stdout_json(&out)["two_qubit_gates"]["min"], 14);
}

#[test]
fn lut_build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let lut = dir.path().join("d7.json");
    let lut = lut.to_str().unwrap();
    assert_eq!(code(&cutcat(&["lut", "build", "--gamma", "14", "--distance", "7", "--out", lut])), 0);
    let out = cutcat(&["verify", "--gamma", "14", "--distance", "7", "--lut", lut]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["decoder"], "lut");
    // a LUT for another gadget is rejected
    assert_eq!(code(&cutcat(&["verify", "--gamma", "16", "--distance", "7", "--lut", lut])), 2);
    assert_eq!(code(&cutcat(&["verify", "--gamma", "14", "--distance", "7", "--lut", "/nonexistent.json"])), 1);
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    v.sort();
    v
}

#[test]
fn out_dir_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cutcat"))
        .args(["mc-gadget", "--gamma", "6", "--distance", "3", "--p", "0.02", "--min-failures", "10"])
        .env("CUTCAT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(files(dir.path()), ["gadget_d3_g6.csv", "gadget_d3_g6.manifest.json"]);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = d.join("cfg.json");
    std::fs::write(&cfg, r#"{"gamma": 6, "distance": 3, "p": [0.02], "seed": 5, "min_failures": 10, "name": "run"}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = d.join("a");
    assert_eq!(code(&cutcat(&["--config", cfg, "mc-gadget", "--seed", "6", "--out-dir", a.to_str().unwrap()])), 0);
    let m: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("run.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "mc-gadget");
    assert_eq!(m["config"]["seed"], 6);
    assert_eq!(m["config"]["gamma"], 6);
    assert_eq!(m["csv"], "run.csv");

    // replaying the manifest gives the same CSV
    let b = d.join("b");
    let manifest = a.join("run.manifest.json");
    let args = ["--config", manifest.to_str().unwrap(), "mc-gadget", "--out-dir", b.to_str().unwrap()];
    assert_eq!(code(&cutcat(&args)), 0);
    assert_eq!(std::fs::read(a.join("run.csv")).unwrap(), std::fs::read(b.join("run.csv")).unwrap());

    // a gadget manifest is not a block config
    assert_eq!(code(&cutcat(&["--config", manifest.to_str().unwrap(), "mc-block"])), 2);
}

#[test]
fn sweep_validation() {
    assert_eq!(code(&cutcat(&["mc-gadget", "--gamma", "6", "--distance", "3"])), 2);
    assert_eq!(code(&cutcat(&["mc-gadget", "--gamma", "6", "--distance", "3", "--sweep", "0.01:0.001:3"])), 2);
    assert_eq!(code(&cutcat(&["mc-gadget", "--gamma", "6", "--distance", "3", "--p", "0.01", "--min-failures", "0"])), 2);
    assert_eq!(code(&cutcat(&["mc-block", "--code", "steane", "--p", "0.01", "--ratio", "-1"])), 2);
    assert_eq!(code(&cutcat(&["--jobs", "0", "bound", "--gamma", "4", "--t", "1", "--p", "0.1"])), 2);
}

#[test]
fn block_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("steane.txt");
    std::fs::write(&path, cutcat::pauli::steane_code().to_text()).unwrap();
    let out_dir = dir.path().join("out");
    let out = cutcat(&[
        "mc-block", "--code", path.to_str().unwrap(), "--p", "0.03", "--min-failures", "10", "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(files(&out_dir), ["block_steane_r20.csv", "block_steane_r20.manifest.json"]);
    std::fs::write(&path, "7 1 3\nX 1\n1111\n").unwrap();
    assert_eq!(code(&cutcat(&["mc-block", "--code", path.to_str().unwrap(), "--p", "0.03"])), 2);
}
