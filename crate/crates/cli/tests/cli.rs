use std::process::{Command, Output};

use bweyl::exactnum::{make_fraction_field, make_prime_field, IntegerRing};
use bweyl_cli::polyjson;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bweyl")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn cmn_single_entries() {
    let v = json_ok(&["cmn", "--m", "1", "--n", "1"]);
    assert_eq!(v["cross_check"], true);
    assert_eq!(v["polynomial"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(v["polynomial"]["terms"][0]["coef"], "1");

    let v = json_ok(&["cmn", "--m", "2", "--n", "2"]);
    let (_, _, p) = polyjson::decode(&IntegerRing, &v["polynomial"]).unwrap();
    assert_eq!(p, bweyl::balgebra::compute_c(2, 2));
}

#[test]
fn cmn_table() {
    let v = json_ok(&["cmn", "--table", "--max", "4"]);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 16);
    assert!(entries.iter().all(|e| e["cross_check"] == true && e["integral"] == true));
    assert_eq!(v["all_checks"], true);
}

#[test]
fn normal_forms() {
    let v = json_ok(&["nf", "--p", "2", "--m", "1", "--n", "1", "--a", "a0", "--b", "b0", "y0*x0"]);
    assert_eq!(v["text"], "x0*y0 + 1");
    let v = json_ok(&["nf", "--universal", "y[2]*x[1]"]);
    assert_eq!(v["text"], "x1*y2 - y1");
    let v = json_ok(&["nf", "--p", "2", "--m", "1", "--n", "1", "[y0,[y0,x0]]"]);
    assert_eq!(v["text"], "0");
}

#[test]
fn pretty_output_is_plain_text() {
    let out = run(&["--format", "pretty", "cmn", "--m", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("x1*y1 + 1"), "{text}");
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn witt_polynomials() {
    let v = json_ok(&["wittpoly", "--op", "sum", "--n", "2"]);
    let (_, _, p) = polyjson::decode(&IntegerRing, &v["polynomial"]).unwrap();
    assert_eq!(p, *bweyl::witt::witt_table().sum(2));
    let v = json_ok(&["wittpoly", "--op", "prod", "--n", "1", "--typical", "--p", "3"]);
    assert_eq!(v["index"], 3);
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "--suite", "simplicity", "--p", "2", "--m", "1", "--n", "1", "--cases", "100", "--seed", "7"][..],
        &["verify", "--suite", "azumaya", "--p", "2", "--m", "1", "--n", "1"],
        &["verify", "--suite", "center", "--p", "3", "--m", "1", "--n", "1"],
        &["verify", "--suite", "prop32", "--p", "2", "--m", "2", "--n", "1"],
        &["verify", "--suite", "thm46", "--p", "3", "--m", "1", "--n", "1"],
    ] {
        let v = json_ok(args);
        assert_eq!(v["pass"], true, "{args:?}");
        assert_eq!(v["failed"], 0);
    }
    let v = json_ok(&["verify", "--suite", "center", "--p", "3", "--m", "1", "--n", "1"]);
    assert_eq!(v["cases"][0]["details"]["center_dim"], 1);
}

#[test]
fn split_two_by_two() {
    let v = json_ok(&["split", "--p", "2", "--m", "1", "--n", "1"]);
    assert_eq!(v["x"][0], serde_json::json!([["0", "0"], ["1", "0"]]));
    assert_eq!(v["y"][0], serde_json::json!([["0", "1"], ["0", "0"]]));
    assert_eq!(v["span_dim"], 4);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["nf", "1+"][..],
        &["nf", "x5"],
        &["nf", "--p", "4", "x0"],
        &["cmn", "--m", "0", "--n", "1"],
        &["verify", "--suite", "thm46", "--a", "1"],
        &["verify", "--suite", "nosuch"],
        &["bogus"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = run(&["nf", "1+"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("syntax"));
}

#[test]
fn verification_is_deterministic_across_thread_counts() {
    let args = ["verify", "--suite", "simplicity", "--p", "2", "--m", "2", "--n", "1", "--cases", "40", "--seed", "11"];
    let outputs: Vec<Vec<u8>> = ["1", "4"]
        .iter()
        .map(|t| {
            let out = Command::new(env!("CARGO_BIN_EXE_bweyl")).args(args).env("RAYON_NUM_THREADS", t).output().unwrap();
            assert_eq!(out.status.code(), Some(0));
            out.stdout
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn fraction_field_normal_form_round_trips() {
    let v = json_ok(&["nf", "--p", "3", "--m", "1", "--n", "1", "--a", "a0", "--b", "b0", "(a0+1)*x0*y0 + y0^2*x0"]);
    let k = make_fraction_field(make_prime_field(3).unwrap(), &["a0", "b0"]).unwrap();
    let (xv, yv, p) = polyjson::decode(&k, &v["normal_form"]).unwrap();
    assert_eq!(polyjson::encode(&k, &xv, &yv, &p), v["normal_form"]);
}
