//! End-to-end runs of the `hartley` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn hartley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hartley"))
        .args(args)
        .env_remove("HARTLEY_MAX_QUBITS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn transform_check_reports_small_errors() {
    let out = hartley(&["--command", "transform-check", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "hartley-cli/1");
    assert_eq!(v["command"], "transform-check");
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        assert!(r["max_error"].as_f64().unwrap() <= 1e-9);
        assert!(r["ancilla_residual"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn malformed_order_is_a_precondition_failure() {
    let out = hartley(&["--command", "transform-check", "--N", "12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("power of two"));
    let out = hartley(&["--command", "transform-check", "--n", "3", "--N", "16"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hartley(&["--command", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hartley"))
        .args(["--command", "money-demo", "--N", "64"])
        .env("HARTLEY_MAX_QUBITS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn gate_bench_csv_and_json() {
    let out = hartley(&["--command", "gate-bench", "--n", "12", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,tally_recursive,tally_qft_based,model_2n2,model_2.5n2,ratio"
    );
    let ten: Vec<&str> = lines.nth(9).unwrap().split(',').collect();
    assert_eq!(ten[0], "10");
    assert_eq!(ten[3].parse::<f64>().unwrap(), 200.0);
    assert_eq!(ten[4].parse::<f64>().unwrap(), 250.0);

    let v = json(&hartley(&["--command", "gate-bench"]));
    let ratio = v["result"]["fit"]["leading_ratio"].as_f64().unwrap();
    assert!((0.75..=0.85).contains(&ratio), "{ratio}");
}

#[test]
fn money_demo_transcript() {
    let out = hartley(&["--command", "money-demo", "--N", "32", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let verdicts: Vec<&str> = v["result"]["verifications"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["verdict"].as_str().unwrap())
        .collect();
    assert_eq!(verdicts, ["accept", "reject", "reject"]);
    assert_eq!(
        v["result"]["banknote"]["amplitudes"]
            .as_array()
            .unwrap()
            .len(),
        32
    );
    let out = hartley(&["--command", "money-demo", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn walk_recover_manifest_and_exit_codes() {
    let out = hartley(&[
        "--command",
        "walk-recover",
        "--N",
        "32",
        "--bits",
        "8",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let m = &v["result"]["manifest"];
    assert_eq!(m["estimates"].as_array().unwrap().len(), 5);
    assert_eq!(m["generated_h"], m["recovered_h"]);

    // One bit cannot separate the candidates.
    let out = hartley(&["--command", "walk-recover", "--N", "16", "--bits", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("retry with more precision bits"));

    // A low-precision run that picks the wrong pair.
    let out = hartley(&[
        "--command",
        "walk-recover",
        "--N",
        "16",
        "--bits",
        "4",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(5));
    let v = json(&out);
    assert_eq!(v["result"]["success"], false);

    let out = hartley(&["--command", "walk-recover", "--N", "16", "--bits", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_inputs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in [
        vec!["--command", "money-demo", "--N", "16", "--seed", "9"],
        vec![
            "--command",
            "walk-recover",
            "--N",
            "16",
            "--bits",
            "6",
            "--seed",
            "2",
        ],
        vec!["--command", "gate-bench", "--n", "8"],
    ] {
        let mut files = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("out{i}.json"));
            let mut args = cmd.clone();
            args.extend(["--out", path.to_str().unwrap()]);
            let out = hartley(&args);
            assert!(out.status.success(), "{cmd:?}");
            assert!(out.stdout.is_empty());
            files.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(files[0], files[1], "{cmd:?}");
    }
}
