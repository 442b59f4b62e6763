use std::process::{Command, Output};

use fracdarboux::numeric::read_grid_fn;
use serde_json::Value;

fn run(args: &[&str], tol: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fracdarboux"));
    cmd.args(args).env_remove("DARBOUX_TOL");
    if let Some(t) = tol {
        cmd.env("DARBOUX_TOL", t);
    }
    cmd.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn exit_codes() {
    let ok = run(&["decompose", "--map", "1,2,3,4"], None);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["status"], "ok");

    let domain = run(&["decompose", "--map", "1,0,0,1"], None);
    assert_eq!(domain.status.code(), Some(1));
    assert_eq!(json(&domain)["payload"]["code"], "affine_only");

    let usage = run(&["decompose"], None);
    assert_eq!(usage.status.code(), Some(2));
    assert!(usage.stdout.is_empty());
}

#[test]
fn envelope_echoes_argv_with_sorted_keys() {
    let o = run(&["transform", "--r", "1", "--map", "0,1,1,0"], None);
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let v = json(&o);
    assert_eq!(v["command"][0], "transform");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "payload", "status", "warnings"]);
    assert!(text.find("\"command\"").unwrap() < text.find("\"payload\"").unwrap());
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&["--out", path.to_str().unwrap(), "table1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn csv_roundtrip_through_transport() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("u.csv");
    let o = run(
        &[
            "transport",
            "--r",
            "1",
            "--map",
            "0,1,1,0",
            "--grid",
            "1,1.5,41",
            "--init",
            "1,1,1",
            "--csv",
            first.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let u = read_grid_fn(&std::fs::read_to_string(&first).unwrap()).unwrap();
    assert_eq!(u.len(), 41);

    // feed the transported solution back as a source of the image equation
    let o = run(
        &["transport", "--r", "1", "--map", "1,0,0,1", "--grid", "1,1.5,41", "--w-csv", first.to_str().unwrap()],
        None,
    );
    let v = json(&o);
    assert_eq!(v["status"], "ok", "{v}");
    let out: Vec<f64> =
        v["payload"]["u"]["value"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().parse().unwrap()).collect();
    for (a, b) in out.iter().zip(&u.values) {
        assert!((a - b / u.values[0]).abs() < 1e-6);
    }
}

#[test]
fn tolerance_override_is_reported() {
    let args = ["frac-darboux", "--u", "0", "--c", "1", "--seed1", "0,1,-1", "--seed2", "0,1,1", "--grid", "-1,1,201"];
    let default = json(&run(&args, None));
    assert_eq!(default["status"], "ok");
    assert!(default["warnings"].as_array().unwrap().is_empty());

    let tight = json(&run(&args, Some("1e-30")));
    assert_eq!(tight["payload"]["code"], "invalid_seed");
    assert!(tight["warnings"][0].as_str().unwrap().contains("DARBOUX_TOL"));

    let bad = run(&args, Some("abc"));
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn symbolic_payloads_are_exact_text() {
    let v = json(&run(&["invariant", "--q", "-2*x", "--r", "n", "--param", "n=4/3"], None));
    assert_eq!(v["payload"]["beta0"], "-x^2 + 7/3");
}
