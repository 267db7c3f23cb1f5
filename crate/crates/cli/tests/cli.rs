use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qproc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qproc"))
        .args(args)
        .env_remove("QPROC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn conditional_selects_pauli_x() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "c.json",
        r#"{"kind":"conditional",
            "blocks":[[[[1,0],[0,0]],[[0,0],[1,0]]], [[[0,0],[1,0]],[[1,0],[0,0]]]],
            "program":{"dims":[2],"amplitudes":[[0,0],[1,0]]},
            "data":{"dims":[2],"amplitudes":[[1,0],[0,0]]}}"#,
    );
    let v = json(&qproc(&["simulate", &doc]));
    assert_eq!(v["schmidt_rank"], 1);
    let output = v["output"].as_array().unwrap();
    assert_eq!(output.len(), 1);
    assert_eq!(output[0]["index"], serde_json::json!([1, 1]));
    assert_eq!(v["data_output"], serde_json::json!([[0.0, 0.0], [1.0, 0.0]]));
}

#[test]
fn zero_program_network_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "n.json",
        r#"{"kind":"network","n":2,
            "program":[{"momentum":0},{"momentum":0},{"momentum":0},
                       {"momentum":0},{"momentum":0},{"momentum":0},{"bit":0}],
            "data":{"dims":[2,2],"amplitudes":[[0.5,0],[0,0.5],[-0.5,0],[0,-0.5]]}}"#,
    );
    let v = json(&qproc(&["simulate", &doc, "--momentum-resolution", "65536"]));
    let data: Vec<[f64; 2]> = serde_json::from_value(v["data_output"].clone()).unwrap();
    let expected = [[0.5, 0.0], [0.0, 0.5], [-0.5, 0.0], [0.0, -0.5]];
    for (a, b) in data.iter().zip(expected) {
        assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    }
    assert_eq!(v["schmidt_rank"], 1);
}

#[test]
fn missing_dims_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "bad.json",
        r#"{"kind":"conditional","blocks":[[[[1,0]]]],
            "program":{"amplitudes":[[1,0]]},
            "data":{"dims":[1],"amplitudes":[[1,0]]}}"#,
    );
    let out = qproc(&["simulate", &doc]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dims"));
}

#[test]
fn unnormalized_input_warns_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "w.json",
        r#"{"kind":"conditional","blocks":[[[[1,0],[0,0]],[[0,0],[1,0]]]],
            "program":{"dims":[1],"amplitudes":[[1,0]]},
            "data":{"dims":[2],"amplitudes":[[1,0],[1,0]]}}"#,
    );
    let out = qproc(&["simulate", &doc]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning: data.amplitudes"));
}

#[test]
fn sweep_exact_column() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "s.json",
        r#"{"kind":"stochastic-sweep","alpha":0.77,"m_min":1,"m_max":3,"trials":1000,"seed":9}"#,
    );
    let out = qproc(&["sweep", &doc]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,exact_success,closed_form,monte_carlo_frequency,standard_error,trials"
    );
    let exact: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(exact.len(), 3);
    for (got, want) in exact.iter().zip([0.5, 0.75, 0.875]) {
        assert!((got - want).abs() < 1e-14);
    }
}

#[test]
fn sweep_rejects_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "s.json",
        r#"{"kind":"stochastic-sweep","alpha":0.77,"m_min":1,"m_max":3,"trials":0}"#,
    );
    let out = qproc(&["sweep", &doc]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trials"));
}

#[test]
fn sweep_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "s.json",
        r#"{"kind":"stochastic-sweep","alpha":1.3,"m_min":1,"m_max":5,"trials":3000}"#,
    );
    let a = qproc(&["sweep", &doc, "--seed", "42"]);
    let b = qproc(&["sweep", &doc, "--seed", "42"]);
    let c = qproc(&["sweep", &doc, "--seed", "43"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_dir_env_names_file_by_command() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "s.json",
        r#"{"kind":"stochastic-sweep","alpha":0.5,"m_min":1,"m_max":2,"trials":10}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_qproc"))
        .args(["sweep", &doc])
        .env("QPROC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(dir.path().join("sweep.csv")).unwrap().starts_with("m,"));
}

#[test]
fn compile_identity_and_pauli_x() {
    let v = json(&qproc(&["compile", "--matrix", "1", "0", "0", "0", "0", "0", "1", "0"]));
    for k in ["q1", "q2", "q3", "distance"] {
        assert!(v[k].as_f64().unwrap().abs() < 1e-12, "{k}: {}", v[k]);
    }
    let v = json(&qproc(&["compile", "--matrix", "0", "0", "1", "0", "1", "0", "0", "0"]));
    assert!((v["q1"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(v["q2"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["q3"].as_f64().unwrap().abs() < 1e-12);
    assert!(v["distance"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn compile_accepts_negative_entries() {
    // Pauli Y
    let v = json(&qproc(&["compile", "--matrix", "0", "0", "0", "-1", "0", "1", "0", "0"]));
    assert!(v["distance"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn compile_rejects_non_unitary() {
    let out = qproc(&["compile", "--matrix", "1.1", "0", "0", "0", "0", "0", "1", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not unitary"), "{err}");
    assert!(err.contains("2.100e-1"), "{err}");
}

#[test]
fn verify_exit_codes() {
    let ok = qproc(&["verify"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 20);

    let bad = qproc(&["verify", "--fault-inject"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8(bad.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("gates.theta_unitary_det") && l.ends_with("FAIL")));
}
