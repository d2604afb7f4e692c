use std::path::PathBuf;
use std::process::{Command, Output};

use ncorder_core::exprparse::{eval_str, Env};
use ncorder_core::ncalg::serial::PolyDoc;
use ncorder_core::NcPoly;
use serde_json::Value;

fn ncorder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncorder"))
        .args(args)
        .env_remove("NCORDER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = ncorder(&full);
    (serde_json::from_slice(&o.stdout).expect("valid json"), o.status.code().unwrap())
}

fn poly(v: &Value) -> NcPoly {
    let doc: PolyDoc = serde_json::from_value(v.clone()).unwrap();
    NcPoly::try_from(&doc).unwrap()
}

fn p(src: &str) -> NcPoly {
    eval_str(src, &Env::standard()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn order_rules() {
    let out = ncorder(&["order", "--rule", "time", "--expr", "x1*x2*x3"]);
    assert_eq!(stdout(&out), "x3*x2*x1\n");
    let out = ncorder(&["order", "--rule", "antitime", "--expr", "x3*x2*x1"]);
    assert_eq!(stdout(&out), "x1*x2*x3\n");
    let out = ncorder(&["order", "--rule", "nxy:X,Y", "--expr", "Y*X"]);
    assert_eq!(stdout(&out), "X*Y\n");
    let out = ncorder(&["order", "--rule", "weyl", "--expr", "X*Y"]);
    assert_eq!(stdout(&out), "1/2*X*Y + 1/2*Y*X\n");
}

#[test]
fn eval_prints_canonical_form() {
    let out = ncorder(&["eval", "--expr", "D([X,Y] -> X)(X + Y)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "X*Y - Y*X\n");
    let (v, code) = json(&["eval", "--expr", "exp(X;2)"]);
    assert_eq!(code, 0);
    assert_eq!(poly(&v["poly"]), p("1 + X + 1/2*X*X"));
}

#[test]
fn worked_example_report() {
    let (v, code) = json(&["got", "verify", "--o", "time", "--oprime", "antitime", "--word", "1,2,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["equal"], Value::Bool(true));
    assert_eq!(poly(&v["lhs"]), p("x3*x2*x1"));
    assert_eq!(poly(&v["rhs"]), p("x3*x2*x1"));
    let table = v["contractions"].as_array().unwrap();
    assert_eq!(table.len(), 3);
    for c in table {
        let (a, b) = (c["alpha"].as_str().unwrap(), c["beta"].as_str().unwrap());
        assert_eq!(poly(&c["poly"]), p(&format!("-[{a},{b}]")));
    }
    assert_eq!(v["orderings"]["o"], "time");
    assert_eq!(v["word"], serde_json::json!(["x1", "x2", "x3"]));
}

#[test]
fn same_ordering_has_no_contractions() {
    let (v, code) = json(&["got", "verify", "--o", "time", "--oprime", "time", "--word", "1,2"]);
    assert_eq!(code, 0);
    assert!(v["contractions"].as_array().unwrap().iter().all(|c| poly(&c["poly"]).is_zero()));
}

#[test]
fn decomposed_verification_with_numeric_check() {
    let l = temp_file("l_decomposed.json", r#"{"A": {"1": "2/3", "2": "-1/2"}, "B": {"1": 3, "2": "5/7"}}"#);
    let (v, code) = json(&[
        "got", "verify", "--o", "alpha", "--oprime", "time", "--word", "A,B", "--L", l.to_str().unwrap(), "--numeric",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["equal"], Value::Bool(true));
    assert_eq!(v["numeric"]["pass"], Value::Bool(true));
    assert!(!poly(&v["contractions"][0]["poly"]).is_zero());
}

#[test]
fn malformed_decomposition_is_usage_error() {
    let l = temp_file("l_bad.json", r#"{"A": {"1": "2/x"}}"#);
    let out = ncorder(&["got", "verify", "--o", "alpha", "--oprime", "time", "--word", "A", "--L", l.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let l = temp_file("l_zero.json", r#"{"A": {"1": "0"}}"#);
    let out = ncorder(&["got", "verify", "--o", "alpha", "--oprime", "time", "--word", "A", "--L", l.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = ncorder(&["got", "verify", "--o", "alpha", "--oprime", "time", "--word", "A", "--L", "/nonexistent/l.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bch_listing_and_verdicts() {
    let (v, code) = json(&["bch", "--max-order", "3", "--method", "got"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], Value::Bool(true));
    let z3 = poly(&v["exponent"][2]["poly"]);
    assert_eq!(z3, p("1/12*[X,[X,Y]] - 1/12*[Y,[X,Y]]"));
    assert_eq!(poly(&v["components"][0]["poly"]), p("X + Y"));

    let out = ncorder(&["bch", "--max-order", "1"]);
    assert!(stdout(&out).contains("z1 = X + Y"));
    let (v, code) = json(&["bch", "--max-order", "6", "--method", "classical"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"][0]["equal"], Value::Bool(true));
}

#[test]
fn bch_cap_is_usage_error() {
    assert_eq!(ncorder(&["bch", "--max-order", "9"]).status.code(), Some(2));
    assert_eq!(ncorder(&["bch", "--method", "nope"]).status.code(), Some(2));
}

#[test]
fn magnus_commands() {
    let (v, code) = json(&["magnus", "--steps", "2", "--max-order", "2"]);
    assert_eq!(code, 0);
    assert_eq!(poly(&v["exponent"][1]["poly"]), p("1/2*[A@2, A@1]"));
    let (v, code) = json(&["magnus", "--steps", "1", "--max-order", "4", "--method", "log"]);
    assert_eq!(code, 0);
    let total: NcPoly = v["exponent"].as_array().unwrap().iter().map(|c| poly(&c["poly"])).sum();
    assert_eq!(total, p("A@1"));
    let (v, code) = json(&["magnus", "--steps", "3", "--max-order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdicts"].as_array().unwrap().len(), 4);
    assert_eq!(ncorder(&["magnus", "--steps", "4"]).status.code(), Some(2));
}

#[test]
fn numeric_truncation_ratio() {
    let (v, code) = json(&["numeric"]);
    assert_eq!(code, 0);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((80.0..=200.0).contains(&ratio));
}

#[test]
fn suite_smoke_and_mutant() {
    let out = ncorder(&["suite", "--cases", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = ncorder(&["suite", "--cases", "10", "--mutant", "negate-contraction"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let (v, code) = json(&["suite", "--cases", "2", "--property", "push_lemma"]);
    assert_eq!(code, 0);
    assert_eq!(v["properties"][0]["cases"], 2);
    assert_eq!(ncorder(&["suite", "--property", "nope"]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two_with_position() {
    let out = ncorder(&["eval", "--expr", "X + $"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:5"));
    let out = ncorder(&["order", "--rule", "sideways", "--expr", "X"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(ncorder(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ncorder"));
        c.args(["--format", "json", "numeric"]);
        match seed {
            Some(s) => c.env("NCORDER_SEED", s),
            None => c.env_remove("NCORDER_SEED"),
        };
        let v: Value = serde_json::from_slice(&c.output().unwrap().stdout).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None), 0);
    assert_eq!(run(Some("17")), 17);
}

#[test]
fn deterministic_output() {
    let a = ncorder(&["suite", "--cases", "3", "--seed", "5"]);
    let b = ncorder(&["suite", "--cases", "3", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}
