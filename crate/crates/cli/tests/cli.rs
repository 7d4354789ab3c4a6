use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_circlepaint"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn selftest_reproduces_examples() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(
        v["permutation_example"]["colors"],
        serde_json::json!({"A": 1, "B": 2, "C": 2, "D": 1, "E": 3})
    );
    assert_eq!(
        v["pillar_example"]["colour_sets"],
        serde_json::json!([[1, 2, 3], [4], [5], [2, 6], [1, 3]])
    );
    assert_eq!(v["degree_7_13"], 5);
}

#[test]
fn gen_lower_with_verification() {
    let out = run(&["gen-lower", "--n", "7", "--omega", "3", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["chord_count"], 14);
    assert_eq!(v["report"]["clique_checked"], 3);
    assert_eq!(v["diagram"]["n"], 7);

    // The generated document can be coloured directly.
    let path = scratch("d73.json", &String::from_utf8(out.stdout).unwrap());
    let out = run(&[
        "color",
        "--input",
        path.to_str().unwrap(),
        "--assert-bounds",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["colors"].as_object().unwrap().len(), 14);
}

#[test]
fn gen_lower_rejects_small_n() {
    let out = run(&["gen-lower", "--n", "6", "--omega", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("must exceed"));
}

#[test]
fn empty_system_uses_no_colours() {
    let out = run_stdin(&["color", "--input", "-"], r#"{"intervals": []}"#);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["chi_used"], 0);
    assert_eq!(v["complete"], true);
    assert_eq!(v["stats"]["colors_used"], 0);
}

#[test]
fn random_colour_verify_round_trip() {
    let sys = run(&["gen-random", "--m", "40", "--seed", "3"]);
    assert_eq!(sys.status.code(), Some(0));
    let sys_path = scratch("r40.json", &String::from_utf8(sys.stdout.clone()).unwrap());
    assert_eq!(json(&sys)["intervals"].as_array().unwrap().len(), 40);

    let out = run(&[
        "color",
        "--input",
        sys_path.to_str().unwrap(),
        "--assert-bounds",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let colouring = json(&out);
    let stats = &colouring["stats"];
    assert!(stats["colors_used"].as_u64() <= stats["bound"].as_u64());
    let col_path = scratch("r40-colours.json", &colouring.to_string());

    let out = run(&[
        "verify",
        "--input",
        sys_path.to_str().unwrap(),
        "--colors",
        col_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valid"], true);

    let omega = json(&run(&["omega", "--input", sys_path.to_str().unwrap()]));
    assert_eq!(omega["omega"], stats["omega"]);
    assert_eq!(
        omega["witness"].as_array().unwrap().len() as u64,
        stats["omega"].as_u64().unwrap()
    );

    let chi = json(&run(&["exact-chi", "--input", sys_path.to_str().unwrap()]));
    let chi = chi["chi"].as_u64().unwrap();
    assert!(chi >= omega["omega"].as_u64().unwrap());
    assert!(chi <= stats["colors_used"].as_u64().unwrap());
}

#[test]
fn verify_reports_conflicts() {
    let sys = scratch(
        "pair.json",
        r#"{"intervals": [{"id": "a", "left": 1, "right": 3}, {"id": "b", "left": 2, "right": 4}]}"#,
    );
    let colours = scratch("pair-colours.json", r#"{"colors": {"a": 1, "b": 1}}"#);
    let out = run(&[
        "verify",
        "--input",
        sys.to_str().unwrap(),
        "--colors",
        colours.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert_eq!(v["conflicts"], serde_json::json!([["a", "b"]]));
}

#[test]
fn exact_chi_budget_exhaustion() {
    let sys = run(&["gen-random", "--m", "60", "--seed", "1"]);
    let path = scratch("r60.json", &String::from_utf8(sys.stdout).unwrap());
    let out = run(&[
        "exact-chi",
        "--input",
        path.to_str().unwrap(),
        "--budget",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["chi"], "exhausted");
}

#[test]
fn bad_input_exits_2() {
    let out = run_stdin(&["color", "--input", "-"], "not json");
    assert_eq!(out.status.code(), Some(2));
    let out = run_stdin(
        &["color", "--input", "-"],
        r#"{"intervals": [{"id": "a", "left": 1, "right": 1}]}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["color", "--input", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bogus-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn commands_are_deterministic() {
    let a = run(&["gen-random", "--m", "25", "--seed", "11"]);
    let b = run(&["gen-random", "--m", "25", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let path = scratch("r25.json", &String::from_utf8(a.stdout).unwrap());
    let c1 = run(&["color", "--input", path.to_str().unwrap()]);
    let c2 = run(&["color", "--input", path.to_str().unwrap()]);
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn bench_emits_rows() {
    let out = run(&["bench", "--sizes", "50,80", "--seeds", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows
        .iter()
        .all(|r| r["colors_used"].as_u64() <= r["bound"].as_u64()));
}
