use std::path::PathBuf;
use std::process::{Command, Output};

use bsa_core::constructions::baseline_mu;
use serde_json::{json, Value};

fn bsa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsa")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn q(num: i64, den: i64) -> Value {
    json!({"num": num.to_string(), "den": den.to_string()})
}

#[test]
fn c0_denseness_reports_every_witness() {
    let out = bsa(&["demo", "c0-denseness", "--seed", "7", "--n", "500"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sections"]["stress"]["witnesses"], 500);
    assert_eq!(r["sections"]["stress"]["falsified"], 0);
    assert_eq!(r["command"], "demo c0-denseness");
    assert_eq!(r["timings"], Value::Null);
}

#[test]
fn reports_are_byte_identical() {
    let a = bsa(&["demo", "l1-denseness", "--seed", "3", "--n", "40"]);
    let b = bsa(&["demo", "l1-denseness", "--seed", "3", "--n", "40"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn nondense_on_the_baseline() {
    let path = temp_file("baseline.json", &serde_json::to_string(&baseline_mu()).unwrap());
    let out = bsa(&["demo", "c01-nondense", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["sections"]["branch"], "NotAttaining");
}

#[test]
fn malformed_input_exits_with_two() {
    let path = temp_file("malformed.json", "{\"atoms\": [");
    let out = bsa(&["demo", "c01-nondense", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn atomic_example_fails_honestly() {
    let out = bsa(&["demo", "measure-ex2"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], false);
}

#[test]
fn the_remaining_demos_pass() {
    for name in ["l1-rnp-negative", "measure-ex1", "dirac-bs", "weakstar"] {
        let out = bsa(&["demo", name, "--n", "30"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn check_orth_on_a_pair() {
    let entries = |v: &[(usize, Value)]| json!({"entries": v.iter().map(|(i, x)| json!({"index": i, "value": x})).collect::<Vec<_>>()});
    let input = json!({
        "model": "l1_sum",
        "x": entries(&[(1, q(1, 1)), (2, q(1, 1))]),
        "y": entries(&[(1, q(1, 1)), (2, q(-1, 1))]),
    });
    let path = temp_file("pair.json", &input.to_string());
    let out = bsa(&["check-orth", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sections"]["bj"], true);
    assert_eq!(r["sections"]["strong"], false);
}

#[test]
fn check_orth_on_an_instance() {
    let input = json!({
        "space": "c0_sup",
        "t": {"entries": [{"index": 1, "value": q(1, 1)}, {"index": 2, "value": q(-2, 1)}]},
        "s": {"entries": [
            {"index": 1, "value": q(3, 10)},
            {"index": 2, "value": q(2, 5)},
            {"index": 3, "value": q(1, 2)},
            {"index": 4, "value": q(1, 2)},
        ]},
    });
    let path = temp_file("instance.json", &input.to_string());
    let out = bsa(&["check-orth", "--input", path.to_str().unwrap(), "--mode", "adjusted-bs"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sections"]["outcome"], "WitnessFound");
    assert_eq!(r["sections"]["mode"], "adjusted_bs");
}

#[test]
fn stress_with_an_injected_case() {
    let rnp = bsa(&["demo", "l1-rnp-negative", "--n", "1"]);
    let r = report(&rnp);
    let cert = &r["sections"]["construction"]["certificate"]["data"];
    let g = cert["g"].clone();
    let instance = json!({"space": "L1_step", "g": g.clone(), "h": cert["h"].clone()});
    let g_path = temp_file("rnp_g.json", &g.to_string());
    let inst_path = temp_file("rnp_instance.json", &instance.to_string());
    let out = bsa(&[
        "stress",
        "--space",
        "l1",
        "--n",
        "0",
        "--input",
        g_path.to_str().unwrap(),
        "--inject",
        inst_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = &report(&out)["sections"]["stress"];
    assert_eq!(s["falsified"], 1);
    assert_eq!(s["falsified_cases"][0]["evidence"]["inconclusive"], false);
}

#[test]
fn matrix_pair_from_input() {
    let path = temp_file("matrices.json", r#"{"a": [[2, 0], [0, 1]], "b": [[0, 1], [1, 0]]}"#);
    let out = bsa(&["matrix-bs", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["sections"]["bj"], true);
    assert!(r["sections"]["witness"].is_array());
}

#[test]
fn timings_are_opt_in() {
    let out = bsa(&["demo", "measure-ex1", "--timings"]);
    assert!(report(&out)["timings"]["total_ms"].is_number());
}
