use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_freetorus"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let (code, out) = run(args, stdin);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

const S3XS3: &str = r#"{"dim": 6, "summands": [{"type": "sphere_product", "k": 3, "l": 3}]}"#;
const THREE_S3XS6: &str = r#"{"dim": 9, "betti": {"3": 3}, "spin": true}"#;

#[test]
fn feasible_verdicts_and_exit_codes() {
    let (code, v) = json(&["feasible", "--k", "1", S3XS3], None);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["per_m"][0]["m"], 1);

    let (code, v) = json(&["feasible", "--k", "1", THREE_S3XS6], None);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], false);
    let c1 = v["per_m"][0]["condition1"].as_array().unwrap();
    assert!(c1.iter().any(|c| c["i"] == 4 && c["value"] == -2 && c["ok"] == false));
}

#[test]
fn circle_bundle_over_cp3() {
    let payload = r#"{"base": {"dim": 6, "summands": [{"type": "cp", "m": 3}]}, "euler": [1]}"#;
    let (code, v) = json(&["bundle-circle", payload], None);
    assert_eq!(code, 0);
    assert_eq!(v["total"]["dim"], 7);
    assert_eq!(v["total"]["spin"], true);
    assert!(v["total"]["betti"].as_object().unwrap().values().all(|b| b == 0));
}

#[test]
fn input_from_stdin_and_file() {
    let (code, a) = json(&["normalize"], Some(S3XS3));
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, S3XS3).unwrap();
    let (code, b) = json(&["normalize", path.to_str().unwrap()], None);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let (_, c) = json(&["normalize", "-"], Some(S3XS3));
    assert_eq!(a, c);
    assert_eq!(a["form_star"], true);
}

#[test]
fn torus_bundles_and_four_manifold_bases() {
    let payload = r#"{"base": {"b2": 2}, "euler": [[1, 1], [0, 1]]}"#;
    let (code, v) = json(&["bundle-torus", payload], None);
    assert_eq!(code, 0);
    assert_eq!(v["total"]["betti"]["3"], 2);

    let bad = r#"{"base": {"dim": 5, "summands": [{"type": "twisted_s2"}, {"type": "sphere_product", "k": 2, "l": 3}]}, "euler": [[2, 0], [0, 1]]}"#;
    let (code, v) = json(&["bundle-torus", bad], None);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "not_basis");
    assert_eq!(v["error"]["diagnostics"]["fundamental_group"]["torsion"][0], "2");
}

#[test]
fn errors_are_structured() {
    let (code, v) = json(&["normalize", "{not json"], None);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "input");

    let (code, v) = json(&["feasible", "--k", "1", r#"{"dim": 6, "betti": {"3": 1}, "spin": true}"#], None);
    assert_eq!(code, 2);
    assert!(v["error"]["message"].is_string());

    let (code, v) = json(&["feasible", "--bogus", S3XS3], None);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], "input");

    let payload = r#"{"base": {"dim": 6, "summands": [{"type": "sphere_product", "k": 2, "l": 4}]}, "euler": [2]}"#;
    let (code, v) = json(&["bundle-circle", payload], None);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], "not_primitive");

    let (code, v) = json(&["tower", "--k", "1", THREE_S3XS6], None);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], "infeasible");
}

#[test]
fn classify_base_and_stabilize() {
    let (code, v) = json(&["classify", "--cohom4", S3XS3], None);
    assert_eq!((code, &v["verdict"]), (0, &Value::Bool(true)));
    let (code, v) = json(&["classify", "--cohom2", r#"{"dim": 7, "betti": {"3": 2}, "spin": true}"#], None);
    assert_eq!((code, &v["verdict"]), (1, &Value::Bool(false)));

    let (code, v) = json(&["base", "--table1", r#"{"dim": 7, "betti": {}, "spin": true}"#], None);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["source"], "7a");
    let (code, v) = json(&["base", "--table1", THREE_S3XS6], None);
    assert_eq!((code, &v["found"]), (1, &Value::Bool(false)));

    let (code, v) = json(&["stabilize", "--twisted", r#"{"dim": 7, "betti": {}, "spin": true}"#], None);
    assert_eq!(code, 0);
    assert_eq!(v["m0"], 3);
}

#[test]
fn suspend_and_text_output() {
    let payload = r#"{"base": {"dim": 6, "summands": [{"type": "sphere_product", "k": 3, "l": 3}]}, "euler": []}"#;
    let (code, v) = json(&["suspend", payload], None);
    assert_eq!(code, 0);
    assert_eq!(v["profile"]["betti"]["3"], 2);

    let (code, out) = run(&["--format", "text", "feasible", "--k", "1", S3XS3], None);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("verdict") && l.ends_with("true")), "{out}");
}

#[test]
fn output_is_deterministic() {
    let a = run(&["stabilize", r#"{"dim": 9, "betti": {}, "spin": true}"#], None);
    let b = run(&["stabilize", r#"{"dim": 9, "betti": {}, "spin": true}"#], None);
    assert_eq!(a, b);
}

#[test]
fn selftest_passes() {
    let (code, v) = json(&["selftest", "--bound", "3"], None);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    let (code, _) = json(&["selftest", "--bound", "9"], None);
    assert_eq!(code, 2);
}
