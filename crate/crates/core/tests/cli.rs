use std::process::{Command, Output};

use hkdf_kit::families::hkdf2;
use hkdf_kit::polycore::MultiPoly;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkdf-kit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn family_json_round_trips() {
    let o = run(&["family", "hkdf2:n=2,m=2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains(r#"{"exponents":[2,0],"re":"1/1","im":"0/1"}"#));
    assert!(text.contains(r#"{"exponents":[0,1],"re":"2/1","im":"0/1"}"#));
    assert_eq!(MultiPoly::from_json(text.trim()).unwrap(), hkdf2(2, 2));
}

#[test]
fn family_text_and_csv() {
    let o = run(&["family", "two_index:m=1,n=1", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "x*z + tau");
    let o = run(&["family", "hkdf2:n=0,m=3", "--format", "csv"]);
    assert_eq!(stdout(&o), "x,y,re,im\n0,0,1/1,0/1\n");
}

#[test]
fn eval_prints_value() {
    let o = run(&["eval", "hkdf2:n=2,m=2", "--at", "x=2,y=1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"]["re"], 6.0);
}

#[test]
fn sequences() {
    let lines = |o: &Output| stdout(o).lines().map(str::to_string).collect::<Vec<_>>();
    assert_eq!(lines(&run(&["sequence", "--order", "2", "--count", "7"])), ["1", "0", "2", "0", "12", "0", "120"]);
    assert_eq!(
        lines(&run(&["sequence", "--order", "3", "--count", "10"])),
        ["1", "0", "0", "6", "0", "0", "360", "0", "0", "60480"]
    );
    assert_eq!(
        lines(&run(&["sequence", "--order", "2", "--count", "5", "--signed"])),
        ["1", "0", "-2", "0", "12"]
    );
}

#[test]
fn integrate_emits_ordered_record() {
    let o = run(&["integrate", "--id", "GAUSS_1D_Y", "--params", "n=2,b=1,x=2", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let keys = ["\"id\"", "\"params\"", "\"closed_form\"", "\"oracle\"", "\"error_estimate\"", "\"relative_discrepancy\"", "\"pass\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["params"]["n"], 2);
    assert_eq!(v["pass"], true);
    assert!((v["oracle"]["re"].as_f64().unwrap() - 4.0 * std::f64::consts::PI.sqrt()).abs() < 1e-10);
}

#[test]
fn bessel_prints_value_and_bound() {
    let o = run(&["bessel", "--fn", "ji4", "--n", "1", "--x", "1", "--y", "0.125"]);
    let text = stdout(&o);
    let value: f64 = text.lines().next().unwrap().strip_prefix("value ").unwrap().parse().unwrap();
    assert!((value - 0.440_561_750_888_326_36).abs() < 1e-14);
    assert!(text.contains("tail_bound"));
}

#[test]
fn verify_suite_passes() {
    let o = run(&["verify", "umbral"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("[PASS] umbral/hermite_numbers_m2")));
    assert!(!text.contains("[FAIL]"));
    let o = run(&["verify", "heat", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.to_string().contains("heat_equation"));
}

#[test]
fn exit_codes() {
    // Computation failure.
    assert_eq!(run(&["bessel", "--fn", "j", "--n", "0", "--x", "30", "--K", "5"]).status.code(), Some(1));
    // Usage errors.
    assert_eq!(run(&["family", "bogus:n=1"]).status.code(), Some(2));
    assert_eq!(run(&["family", "hkdf2:n=1,m=2,k=1"]).status.code(), Some(2));
    assert_eq!(run(&["sequence", "--order", "1", "--count", "3"]).status.code(), Some(2));
    assert_eq!(run(&["integrate", "--id", "NOPE", "--params", "n=1"]).status.code(), Some(2));
    assert_eq!(run(&["integrate", "--id", "GAUSS_1D_Y", "--params", "n=1,b=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_hkdf-kit"))
        .args(["verify", "umbral"])
        .env("HKDF_KIT_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
