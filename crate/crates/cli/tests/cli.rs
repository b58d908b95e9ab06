//! End-to-end checks of the binary: exit codes, output text, and the two
//! JSON guarantees — byte-identical reruns and value-level round-tripping.

use std::process::{Command, Output};

use serde_json::Value;

fn steem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steem"))
        .args(args)
        .env_remove("STEEM_MAXDEG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

/// Parse a `--json` line and check it reprints to the same bytes.
fn roundtrip(o: &Output) -> Value {
    let raw = stdout(o);
    let v: Value = serde_json::from_str(raw.trim()).expect("valid json");
    assert_eq!(serde_json::to_string(&v).unwrap(), raw.trim());
    v
}

#[test]
fn adem_reduces_the_examples() {
    let o = steem(&["adem", "Sq2 Sq2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "Sq3 Sq1\n");
    let o = steem(&["adem", "Sq3"]);
    assert_eq!(stdout(&o), "Sq3\n");
    let o = steem(&["adem", "Sq1 Sq1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn adem_json_carries_input_and_output() {
    let o = steem(&["adem", "Sq2 Sq3", "--json"]);
    let v = roundtrip(&o);
    assert_eq!(v["input"], "Sq2 Sq3");
    assert_eq!(v["reduced"], "Sq4 Sq1 + Sq5");
}

#[test]
fn adem_rejects_garbage() {
    assert_eq!(code(&steem(&["adem", "Sqx Sq2"])), 2);
}

#[test]
fn unknown_flags_are_rejected() {
    assert_eq!(code(&steem(&["adem", "Sq2", "--frobnicate"])), 2);
}

#[test]
fn an_lemma_produces_a_verified_witness() {
    let o = steem(&["an-lemma", "--n", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = roundtrip(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["target"], "Sq3 Sq1");
    assert!(!v["triples"].as_array().unwrap().is_empty());
}

#[test]
fn an_lemma_rejects_n_zero() {
    assert_eq!(code(&steem(&["an-lemma", "--n", "0"])), 2);
}

#[test]
fn verify_a1_json_is_deterministic() {
    let a = steem(&["verify", "--suite", "A1", "--json"]);
    let b = steem(&["verify", "--suite", "A1", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = roundtrip(&a);
    let suite = &v.as_array().unwrap()[0];
    assert_eq!(suite["suite"], "A1");
    assert_eq!(suite["seed"], 0);
    assert_eq!(suite["checks"].as_array().unwrap().len(), 100);
    let c = steem(&["verify", "--suite", "A1", "--seed", "7", "--json"]);
    assert_eq!(code(&c), 0);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_all_passes() {
    let o = steem(&["verify", "--suite", "all", "--json"]);
    assert_eq!(code(&o), 0);
    let v = roundtrip(&o);
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn verify_rejects_unknown_suite() {
    assert_eq!(code(&steem(&["verify", "--suite", "A3"])), 2);
}

#[test]
fn nilfilt_json_roundtrips() {
    let o = steem(&["nilfilt", "--module", "SigmaF2(2)", "--maxdeg", "8", "--json"]);
    assert_eq!(code(&o), 0);
    let v = roundtrip(&o);
    assert_eq!(v["bound"], 8);
    assert_eq!(v["stages"][0][2], 1);
    assert_eq!(v["naive_agrees"], true);
}

#[test]
fn weight_of_a_trivial_module_is_zero() {
    let o = steem(&["weight", "--module", "F2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "weight(F2) = 0\n");
}

#[test]
fn tor_over_an_exterior_algebra_is_a_divided_power_line() {
    let o = steem(&["tor", "--algebra", "Lambda(2)", "--smax", "3", "--tmax", "8", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o).trim(),
        r#"{"(0,0)":1,"(1,2)":1,"(2,4)":1,"(3,6)":1}"#
    );
}

#[test]
fn em_loops_reports_a_collapsed_page() {
    let o = steem(&["em-loops", "--space", "sphere:3", "--maxdeg", "9", "--json"]);
    assert_eq!(code(&o), 0);
    let v = roundtrip(&o);
    assert_eq!(v["page"], "E2");
    assert_eq!(v["collapse"], true);
    assert_eq!(v["dims"]["(1,3)"], 1);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn cobar_checks_the_cosimplicial_identities() {
    let o = steem(&["cobar", "--x", "pt", "--y", "S1", "--z", "pt", "--maxdeg", "3", "--json"]);
    assert_eq!(code(&o), 0);
    let v = roundtrip(&o);
    assert_eq!(v["cosimplicial_identities"], true);
    assert_eq!(v["dims"]["(1,1)"], 1);
}

#[test]
fn env_var_overrides_the_default_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_steem"))
        .args(["nilfilt", "--module", "H", "--json"])
        .env("STEEM_MAXDEG", "8")
        .output()
        .expect("binary runs");
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["bound"], 8);
}

#[test]
fn explicit_flag_beats_the_env_var() {
    let o = Command::new(env!("CARGO_BIN_EXE_steem"))
        .args(["nilfilt", "--module", "H", "--maxdeg", "6", "--json"])
        .env("STEEM_MAXDEG", "8")
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["bound"], 6);
}

#[test]
fn conflicting_bound_pins_are_a_usage_error() {
    assert_eq!(
        code(&steem(&["nilfilt", "--module", "H@8", "--maxdeg", "12"])),
        2
    );
}

#[test]
fn impossible_bounds_exit_with_overflow() {
    assert_eq!(code(&steem(&["weight", "--module", "SigmaF1(3)@2"])), 4);
    assert_eq!(
        code(&steem(&["em-loops", "--space", "sphere:4", "--maxdeg", "6"])),
        4
    );
}
