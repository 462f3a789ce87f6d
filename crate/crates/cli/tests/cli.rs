use std::process::{Command, Output};

use hankel_recon_cli::{parse_spec, run, Mode};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankel-recon")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn ones(n: usize) -> String {
    vec!["1"; n].join(",")
}

/// `1/j!` as strings; factorials are built in base 10 since 39! exceeds u128.
fn exp_coeffs(n: usize) -> Vec<String> {
    let mut digits = vec![1u32];
    (0..n)
        .map(|j| {
            let mut carry = 0;
            for d in digits.iter_mut() {
                let t = *d * j.max(1) as u32 + carry;
                *d = t % 10;
                carry = t / 10;
            }
            while carry > 0 {
                digits.push(carry % 10);
                carry /= 10;
            }
            format!("1/{}", digits.iter().rev().map(|d| d.to_string()).collect::<String>())
        })
        .collect()
}

#[test]
fn geometric_series_reconstructs() {
    let out = bin(&["reconstruct", "--coeffs", &ones(20), "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["reconstruction"]["r0"], 1);
    assert_eq!(v["reconstruction"]["Q"], "-1 + z");
    assert_eq!(v["reconstruction"]["P"], "-1");
    assert_eq!(v["window"]["order"], 20);
}

#[test]
fn fibonacci_table_has_vanishing_order_two_minor() {
    let out = bin(&["analyze", "--coeffs", "1,1,2,3,5,8,13,21,34,55", "--m-max", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let entry = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["s"] == 0 && e["m"] == 2)
        .expect("A(0,2) present");
    assert_eq!(entry["value"], "0");
}

#[test]
fn exponential_series_is_a_finding() {
    let out = bin(&["reconstruct", "--coeffs", &exp_coeffs(40).join(","), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert!(v["finding"].as_str().unwrap().starts_with("NotRationalWithinWindow r_max=8"));
}

#[test]
fn errors_exit_one() {
    let out = bin(&["reconstruct", "--coeffs", "1,1", "--r-max", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = bin(&["reconstruct", "--coeffs", "1,(", "--r-max", "1", "--margin", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_reports_mismatch_as_finding() {
    let good = bin(&["verify", "--coeffs", "1,1,1,1,1", "--numerator=-1", "--denominator=-1 + z"]);
    assert_eq!(good.status.code(), Some(0));
    let bad = bin(&["verify", "--coeffs", "1,1,1,2,1", "--numerator=-1", "--denominator=-1 + z", "--json"]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(json_of(&bad)["product"], false);
}

#[test]
fn spec_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("job.json");
    std::fs::write(
        &job,
        r#"{
  "mode": "reconstruct-param",
  "parameters": ["w"],
  "series": {"var": "z", "coeffs": ["1", "w", "w^2", "w^3", "w^4", "w^5", "w^6", "w^7", "w^8", "w^9"]},
  "r_max": 1,
  "certify_margin": 8
}"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = bin(&["reconstruct-param", job.to_str().unwrap(), "--json", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["reconstruction"]["Q"], "-1 + w*z");
    assert_eq!(v["exceptional_generators"], serde_json::json!([]));

    // Flags override file fields.
    let out = bin(&["reconstruct-param", job.to_str().unwrap(), "--r-max", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_is_deterministic() {
    let args = ["reconstruct-multi", "--expr", "(1-z2)/(1-z2-z1)", "--vars", "z1,z2", "--json"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["reconstruction"]["Q_hat"], "1 - z1 - z2");
    assert_eq!(v["field_tower"]["agrees"], true);
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = ["analyze", "--coeffs", "1,2,5,14,42,132,429,1430,4862,16796,58786", "--json"];
    let one = Command::new(env!("CARGO_BIN_EXE_hankel-recon")).args(args).env("HANKEL_RECON_THREADS", "1").output().unwrap();
    let many = bin(&args);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn library_entry_points() {
    let spec = parse_spec(r#"{"mode": "classify", "parameters": ["w"], "series": {"coeffs": ["1", "w", "0", "0", "0", "0", "0", "0", "0", "0"]}}"#)
        .unwrap();
    assert_eq!(spec.mode, Mode::Classify);
    let out = run(&spec).unwrap();
    assert_eq!(out.exit_code, 0);
    assert_eq!(out.report["k0"], 1);

    assert!(parse_spec(r#"{"mode": "reconstruct", "series": {"coeffs": ["1"]}, "expr": "1"}"#).is_err());
    assert!(parse_spec(r#"{"mode": "reconstruct", "expr": "1", "r_max": 0}"#).is_err());
    assert!(parse_spec(r#"{"mode": "reconstruct-multi", "series": {"coeffs": ["1"]}}"#).is_err());
}
