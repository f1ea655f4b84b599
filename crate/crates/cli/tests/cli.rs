use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cuapn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuapn"))
        .arg("-q")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn m_not_divisible_by_3_is_a_usage_error() {
    for cmd in ["apn-check", "spectrum", "permutation", "witness", "surface", "cross-validate"] {
        let out = cuapn(&[cmd, "--m", "5"]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(out.stdout.is_empty());
    }
    let out = cuapn(&["apn-check", "--m", "5", "--u", "0x3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_info_accepts_any_m() {
    let out = cuapn(&["field-info", "--m", "5", "--u", "0x3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdicts"]["supports_cu"], false);
    assert!(!doc["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(cuapn(&["apn-check", "--m", "3", "--u", "zz"]).status.code(), Some(2));
    assert_eq!(cuapn(&["apn-check", "--m", "3", "--u", "0x8"]).status.code(), Some(2));
    assert_eq!(cuapn(&["apn-check", "--m", "3", "--modulus", "0xf"]).status.code(), Some(2));
    assert_eq!(cuapn(&["spectrum", "--m", "12"]).status.code(), Some(2));
    assert_eq!(cuapn(&["verify-identities", "--check", "nope"]).status.code(), Some(2));
    assert_eq!(cuapn(&["bound", "--delta", "2"]).status.code(), Some(2));
    assert_eq!(cuapn(&["verify-cert", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(cuapn(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn seventh_power_u_warns_but_computes() {
    let out = cuapn(&["apn-check", "--m", "3", "--u", "0x1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdicts"]["u_is_seventh_power"], true);
    assert!(doc["warnings"][0].as_str().unwrap().contains("seventh power"));
}

#[test]
fn verify_identities_passes_and_filters() {
    let out = cuapn(&["verify-identities"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdicts"]["all_pass"], true);

    let out = cuapn(&["verify-identities", "--check", "h_factorization", "--m", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let passed = doc["verdicts"]["passed"].as_array().unwrap();
    assert_eq!(passed.len(), 2);
    assert_eq!(passed[0], "h_factorization");
}

#[test]
fn certificates_round_trip_through_files() {
    let path = scratch("witness.json");
    let out = cuapn(&["--out", path.to_str().unwrap(), "witness", "--m", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let ok = cuapn(&["verify-cert", path.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["verdicts"]["valid"], true);

    // a bare certificate is accepted too
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let bare = scratch("bare.json");
    std::fs::write(&bare, doc["certificate"].to_string()).unwrap();
    assert_eq!(cuapn(&["verify-cert", bare.to_str().unwrap()]).status.code(), Some(0));

    let mut tampered = doc["certificate"].clone();
    tampered["triple"][0] = Value::from("0x3");
    let bad = scratch("tampered.json");
    std::fs::write(&bad, tampered.to_string()).unwrap();
    let out = cuapn(&["verify-cert", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["verdicts"]["valid"], false);

    for p in [path, bare, bad] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn planted_fault_exits_3() {
    let out = cuapn(&["cross-validate", "--m", "3", "--fault", "printed-a2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = cuapn(&["cross-validate", "--m", "3", "--fault", "skip-h-filter"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn surface_emits_a_valid_witness_at_m6() {
    let out = cuapn(&["surface", "--m", "6", "--filtered", "--emit-witness", "--band"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdicts"]["off_listed_lines"], 0);
    assert_eq!(doc["verdicts"]["count_orders_agree"], true);
    assert!(doc["certificate"]["kernel_dim"].as_u64().unwrap() >= 2);
    assert_eq!(doc["certificate"]["search"]["strategy"], "surface_point");
}

#[test]
fn exhausted_sampling_has_no_verdict() {
    let out = cuapn(&["witness", "--m", "3", "--sampled", "--max-draws", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["verdicts"]["found"], false);
    assert_eq!(doc["verdicts"]["is_apn"], Value::Null);
    assert!(doc.get("certificate").is_none());
}
