//! End-to-end checks of the qmf binary: output shapes, golden expansions,
//! exit codes, and byte-stability across runs.

use std::process::{Command, Output};

fn qmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qmf(args);
    assert!(
        out.status.success(),
        "qmf {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    qmf(args).status.code().unwrap_or(-1)
}

#[test]
fn expand_golden_lines() {
    assert_eq!(stdout(&["expand", "E4", "--prec", "3"]), "1 + 240*q + 2160*q^2 + O(q^3)\n");
    assert_eq!(stdout(&["expand", "K", "--prec", "2"]), "1728*q - 1285632*q^2 + O(q^3)\n");
    assert_eq!(stdout(&["expand", "eta^24", "--prec", "3"]), "q - 24*q^2 + 252*q^3 + O(q^4)\n");
    let j = stdout(&["expand", "j", "--prec", "3"]);
    assert_eq!(j, "q^(-1) + 744 + 196884*q + O(q^2)\n");
    let eta = stdout(&["expand", "eta", "--prec", "2"]);
    assert!(eta.starts_with("q^(1/24) - q^(25/24)"), "{}", eta);
}

#[test]
fn expand_json_is_exact() {
    let out = stdout(&["expand", "E2", "--prec", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["ramification"], 1);
    assert_eq!(v["precision"], "4");
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms[1]["exp"], "1");
    assert_eq!(terms[1]["coeff"]["coeffs"][0], "-24");
}

#[test]
fn solve_paper_examples() {
    let f1 = stdout(&["solve", "D^2 - (1/18)*E4", "0", "--weight", "2", "--prec", "5"]);
    assert_eq!(f1, "1 + 24*q + 24*q^2 + 96*q^3 + 24*q^4 + O(q^5)\n");
    let f2 = stdout(&["solve", "D^2 - (1/18)*E4", "1/2", "--weight", "2", "--prec", "4"]);
    assert_eq!(f2, "q^(1/2) + 4*q^(3/2) + 6*q^(5/2) + 8*q^(7/2) + O(q^(9/2))\n");
    let f = stdout(&["solve", "D^3 - (1/12)*E4*D + (1/72)*E6", "1/3", "--weight", "2", "--prec", "3"]);
    assert_eq!(f, "q^(1/3) + 7*q^(4/3) + 8*q^(7/3) + O(q^(10/3))\n");
}

#[test]
fn solve_error_paths() {
    // not an indicial root
    assert_eq!(exit_code(&["solve", "D^2 - (1/18)*E4", "1/3", "--weight", "2"]), 3);
    // unparseable operator
    assert_eq!(exit_code(&["solve", "D^2 +", "0"]), 3);
    // mixing grammars
    assert_eq!(exit_code(&["solve", "TK^2", "0"]), 3);
}

#[test]
fn vvmf_both_routes() {
    let out = stdout(&["vvmf", "3", "1/7", "2/7", "4/7", "--route", "both", "--prec", "9"]);
    assert!(out.contains("weight: 2"), "{}", out);
    assert!(out.contains("route agreement: exact agreement"), "{}", out);
    let out = stdout(&["vvmf", "3", "3/7", "5/7", "6/7", "--prec", "5"]);
    assert!(out.contains("weight: 6"), "{}", out);
    let out = stdout(&["vvmf", "2", "0", "1/2", "--prec", "5"]);
    assert!(out.contains("f1 = 1 + 24*q + 24*q^2"), "{}", out);
    // json carries the MLDE parameters
    let out = stdout(&["vvmf", "2", "0", "1/2", "--prec", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["parameters"]["a"], "-1/18");
    assert_eq!(v["weight"], 2);
}

#[test]
fn vvmf_error_paths() {
    assert_eq!(exit_code(&["vvmf", "2", "0", "1/4"]), 3); // weight 1/2, not integral
    assert_eq!(exit_code(&["vvmf", "4", "0", "1/4", "1/2", "3/4"]), 3);
    assert_eq!(exit_code(&["vvmf", "2", "0", "3/2"]), 3); // out of range
}

#[test]
fn eisenstein_difference_and_table() {
    let g1 = stdout(&["eisenstein", "3", "0", "inf", "--prec", "7"]);
    assert_eq!(g1, "1/3 + q^(1/3) + 3*q^(2/3) + 4*q + 7*q^(4/3) + 6*q^(5/3) + 12*q^2 + O(q^(7/3))\n");
    let table = stdout(&["eisenstein", "3", "--table", "--prec", "2", "--format", "csv"]);
    assert!(table.starts_with("N,a1,a2,n,coeff\n"), "{}", table);
    assert!(table.contains("3,0,1,0,1/3"), "{}", table);
    // equal cusps are a usage error
    assert_eq!(exit_code(&["eisenstein", "5", "9/2", "4/7"]), 3);
}

#[test]
fn verify_reports() {
    let out = stdout(&["verify", "ramanujan"]);
    assert_eq!(out, "ramanujan: verified (precision 30)\n");
    let out = stdout(&["verify", "exdeg5"]);
    assert!(out.contains("discrepancy-with-paper-print"), "{}", out);
    assert!(out.contains("3b, derived 9b"), "{}", out);
    assert_eq!(exit_code(&["verify", "no-such-identity"]), 3);
    let out = stdout(&["verify", "supersingular-13", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "verified");
}

#[test]
fn ss_poly_output() {
    assert_eq!(stdout(&["ss-poly", "13"]), "j + 8 (mod 13)\n");
    assert_eq!(stdout(&["ss-poly", "11"]), "1 (mod 11)\n");
    assert_eq!(exit_code(&["ss-poly", "9"]), 3);
    let out = stdout(&["ss-poly", "23", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["coeffs_low_to_high"].as_array().unwrap().len(), 2);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["expand", "A", "--prec", "12"],
        vec!["vvmf", "3", "0", "1/3", "2/3", "--prec", "8", "--format", "json"],
        vec!["eisenstein", "4", "1/2", "inf", "--prec", "9"],
    ] {
        let a = stdout(&args);
        let b = stdout(&args);
        assert_eq!(a, b, "output not byte-stable for {:?}", args);
    }
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(exit_code(&["expand", "F8"]), 3);
    assert_eq!(exit_code(&["no-such-command"]), 3);
    assert_eq!(exit_code(&["expand", "E4", "--format", "csv"]), 3);
}
