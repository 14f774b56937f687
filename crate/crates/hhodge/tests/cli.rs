use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn hhodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhodge"))
        .args(args)
        .env_remove("HHODGE_GAMMA_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.display().to_string()
}

const LINE_GAMMA: &str = r#"{"theory":"line","N":2,"g":1,"n":[2],"gamma":["5/7","-2"]}"#;

#[test]
fn integral_line_reproduces_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(&dir, "g.json", LINE_GAMMA);
    let out = hhodge(&[
        "integral",
        "line",
        r#"{"N":2,"g":1,"n":[2],"k":[1,0],"l":[]}"#,
        "--gamma",
        &g,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "5/7");
    assert_eq!(v["admissible"], true);
    assert_eq!(v["dim_ok"], true);
    assert_eq!(v["c"].as_array().unwrap().len(), 2);
}

#[test]
fn spec_from_file_and_gate_failure() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        &dir,
        "spec.json",
        r#"{"N":2,"g":1,"n":[2],"k":[2,0],"l":[]}"#,
    );
    let out = hhodge(&["integral", "line", &spec]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out),
        serde_json::json!({"value": "0", "admissible": true, "dim_ok": false})
    );
}

#[test]
fn gamma_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "a.json", LINE_GAMMA);
    let out = Command::new(env!("CARGO_BIN_EXE_hhodge"))
        .args(["integral", "line", r#"{"N":2,"g":1,"n":[2],"k":[0,1]}"#])
        .env("HHODGE_GAMMA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "-2");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // malformed input
    assert_eq!(
        hhodge(&["integral", "line", "{not json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hhodge(&["integral", "line", r#"{"N":2,"g":1,"n":[2],"k":[1]}"#])
            .status
            .code(),
        Some(2)
    );
    // missing Γ
    let out = hhodge(&["integral", "line", r#"{"N":2,"g":1,"n":[2],"k":[1,0]}"#]);
    assert_eq!(out.status.code(), Some(3));
    // missing surface one-point value
    assert_eq!(
        hhodge(&["integral", "surface", r#"{"N":2,"g":1,"l":[1]}"#])
            .status
            .code(),
        Some(3)
    );
    // degenerate weight
    let out = hhodge(&[
        "integral",
        "surface",
        r#"{"N":4,"g":2,"n":[1,0,1],"k":[0,0]}"#,
    ]);
    assert_eq!(out.status.code(), Some(4));
    // conflicting tables
    let a = write(&dir, "a.json", LINE_GAMMA);
    let b = write(
        &dir,
        "b.json",
        r#"{"theory":"line","N":2,"g":1,"n":[2],"gamma":["5/7","3"]}"#,
    );
    let out = hhodge(&[
        "integral",
        "line",
        r#"{"N":2,"g":1,"n":[2],"k":[1,0]}"#,
        "--gamma",
        &a,
        "--gamma",
        &b,
    ]);
    assert_eq!(out.status.code(), Some(2));
    // usage
    assert_eq!(
        hhodge(&["verify", "line", "--samples", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hhodge(&["series", "hodge", "--order", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn inadmissible_reports_zero() {
    let v = json(&hhodge(&[
        "integral",
        "line",
        r#"{"N":2,"g":1,"n":[1],"k":[0]}"#,
    ]));
    assert_eq!(v["admissible"], false);
    assert_eq!(v["value"], "0");
}

#[test]
fn surface_with_initial_and_modes() {
    let out = hhodge(&[
        "integral",
        "surface",
        r#"{"N":2,"g":1,"l":[2,0]}"#,
        "--initial",
        "3",
    ]);
    assert_eq!(json(&out)["value"], "1");
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        &dir,
        "s.json",
        r#"{"theory":"surface","N":2,"g":2,"n":[2],"gamma":["1","1"]}"#,
    );
    let spec = r#"{"N":2,"g":2,"n":[2],"k":[1,0]}"#;
    let c = json(&hhodge(&["integral", "surface", spec, "--gamma", &g]));
    let v = json(&hhodge(&[
        "integral",
        "surface",
        spec,
        "--gamma",
        &g,
        "--matrix-mode",
        "verbatim",
    ]));
    assert_eq!(c["value"], "1");
    assert_ne!(v["value"], "1");
}

#[test]
fn series_triples() {
    let v = json(&hhodge(&["series", "initial", "--n", "2", "--order", "4"]));
    assert!(v
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([2, 1, "1/16"])));
    let v = json(&hhodge(&["series", "hodge", "--order", "4"]));
    assert!(v
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([4, 0, "7/5760"])));
    let v = json(&hhodge(&["series", "initial", "--n", "1", "--order", "6"]));
    assert!(v.as_array().unwrap().iter().all(|t| t[2] == "0"));
}

#[test]
fn matrix_output() {
    let v = json(&hhodge(&[
        "matrix",
        "surface",
        "--n",
        "2",
        "-g",
        "2",
        "--mult",
        "2",
        "--matrix-mode",
        "verbatim",
    ]));
    assert_eq!(v["scaled"], serde_json::json!([["4", "2"], ["2", "4"]]));
    let v = json(&hhodge(&[
        "matrix", "line", "--n", "2", "-g", "1", "--mult", "2",
    ]));
    assert_eq!(
        v["matrix"],
        serde_json::json!([["3/2", "1/2"], ["1/2", "3/2"]])
    );
    assert_eq!(v["scaled"], serde_json::json!([["4", "4/3"], ["4/3", "4"]]));
}

#[test]
fn verify_reports() {
    let out = hhodge(&[
        "verify",
        "line",
        "--samples",
        "15",
        "--scope",
        "stacky",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let inst = v["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 15);
    assert!(inst
        .iter()
        .enumerate()
        .all(|(i, r)| r["index"] == i && r["recursion_residual"] == "0"));

    let out = hhodge(&[
        "verify",
        "surface",
        "--samples",
        "10",
        "--scope",
        "stacky",
        "--matrix-mode",
        "verbatim",
    ]);
    assert_eq!(out.status.code(), Some(5));
    assert!(json(&out)["failures"].as_u64().unwrap() > 0);

    let out = hhodge(&["verify", "line", "--scope", "nonstacky"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(json(&out)["nonstacky"][0]["pass"], false);
}
