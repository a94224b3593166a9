//! End-to-end tests of the qmock binary: formats, exit codes, and the
//! round-trip guarantee for expansions.

use std::io::Write;
use std::process::{Command, Output};

use qmock_core::catalog;
use qmock_core::rational::parse_rational;
use qmock_core::series::TruncationPolicy;

fn qmock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn expand_nu_csv_matches_documented_rows() {
    let out = qmock(&["expand", "--series", "nu", "--qmax", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text, "q_exp,coeff\n0,1\n1,-1\n2,2\n3,-2\n4,2\n5,-3\n");
    assert!(!text.contains("schema"), "CSV mode carries no schema field");
}

#[test]
fn expand_json_round_trips_against_fresh_expansion() {
    let out = qmock(&[
        "expand", "--series", "f1-cleared", "--qmax", "8", "--zeta-cap", "4",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], "1");
    assert_eq!(doc["series"], "f1-cleared");

    let policy = TruncationPolicy { zeta_cap: 4, ..Default::default() };
    let fresh = catalog::lookup("f1-cleared").unwrap().build(&policy, 8).unwrap();

    // every reported coefficient matches, and nothing is missing
    let coeffs = doc["coefficients"].as_object().unwrap();
    let mut reported = 0usize;
    for (q_key, inner) in coeffs {
        let q: i64 = q_key.parse().unwrap();
        for (z_key, val) in inner.as_object().unwrap() {
            let z: i64 = z_key.parse().unwrap();
            let c = parse_rational(val.as_str().unwrap()).unwrap();
            assert_eq!(c, fresh.coeff_rat(q, z), "coefficient at q^{q} zeta^{z}");
            reported += 1;
        }
    }
    let expected: usize = fresh.iter_nonzero().map(|(_, zl)| zl.iter().count()).sum();
    assert_eq!(reported, expected);
}

#[test]
fn expand_output_is_deterministic() {
    let run = || stdout_of(&qmock(&["expand", "--series", "ds2", "--qmax", "6", "--zeta-cap", "3"]));
    assert_eq!(run(), run());
    let list = || stdout_of(&qmock(&["list"]));
    assert_eq!(list(), list());
}

#[test]
fn list_names_every_series_and_identity() {
    let out = qmock(&["list"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], "1");
    assert_eq!(doc["identities"].as_array().unwrap().len(), 15);
    let names: Vec<&str> = doc["series"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap())
        .collect();
    for expected in ["nu", "phi", "rho", "ds1", "f1-cleared", "m10", "srivastava-1"] {
        assert!(names.contains(&expected), "{expected} missing from list");
    }
}

#[test]
fn verify_all_small_window_passes_with_exit_zero() {
    let out = qmock(&["verify-all", "--A", "3", "--B", "8"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 15);
    assert!(reports.iter().all(|r| r["status"] == "PASS"));
}

#[test]
fn verify_single_with_stability_flag() {
    let out = qmock(&["verify", "--id", "ID-D2", "--A", "3", "--B", "8", "--margin", "2", "--stability"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["report"]["status"], "PASS");
    assert_eq!(doc["stability"]["status"], "PASS");
    assert_eq!(doc["stability"]["margin"], 2);
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["verify", "--id", "ID-NOPE"],
        vec!["expand", "--series", "nonexistent", "--qmax", "4"],
        vec!["verify-all", "--B", "0"],
        vec!["eval", "--fn", "nosuch"],
        vec!["expand", "--series", "nu", "--qmax", "4", "--format", "xml"],
        vec!["residual", "--check", "unknown"],
        vec!["totally-unknown-subcommand"],
    ] {
        let out = qmock(&args);
        assert_eq!(out.status.code(), Some(64), "args {args:?}");
    }
}

#[test]
fn eval_e_at_one() {
    let out = qmock(&["eval", "--fn", "e", "--z", "1"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["schema"], "1");
    let re = doc["value"]["re"].as_str().unwrap();
    assert!(re.starts_with("9.87811117815197"), "E(1) = {re}");
    assert!(doc["double_run_delta"].as_f64().unwrap() < 1e-12);
}

#[test]
fn eval_accepts_negative_arguments() {
    let out = qmock(&[
        "eval", "--fn", "r-univ", "--alpha-re", "0.3", "--alpha-im", "0.4", "--beta-re", "-0.2",
        "--q-re", "0.04",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let out = qmock(&["eval", "--fn", "e", "--z", "-1.3"]);
    assert!(out.status.success());
}

#[test]
fn computation_errors_exit_2() {
    // mu at the lattice point u = 0 is a pole
    let out = qmock(&["eval", "--fn", "mu", "--u-re", "0", "--v-re", "0.1", "--v-im", "0.4"]);
    assert_eq!(out.status.code(), Some(2));
    // |q| >= 1 is outside the R domain
    let out = qmock(&["eval", "--fn", "r-univ", "--alpha-re", "0.3", "--beta-re", "0.2", "--q-re", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_requires_function_arguments() {
    let out = qmock(&["eval", "--fn", "mu", "--tau-re", "0", "--tau-im", "1"]);
    assert_eq!(out.status.code(), Some(64), "missing --u-re/--v-re must be a usage error");
}

#[test]
fn residual_runs_on_grid_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{"points":[
            {{"tau_re":0.0,"tau_im":1.0,"u_re":0.3,"u_im":0.2,"v_re":0.1,"v_im":0.4}},
            {{"tau_re":0.1,"tau_im":0.8,"u_re":0.25,"u_im":0.3,"v_re":-0.15,"v_im":0.35}}
        ],"tol":1e-9}}"#
    )
    .unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let out = qmock(&["residual", "--check", "ramanujan", "--grid-file", &path]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["all_pass"], true);
    assert_eq!(doc["points"].as_array().unwrap().len(), 2);
    for p in doc["points"].as_array().unwrap() {
        assert!(p["residual"].as_f64().unwrap() < 1e-9);
    }
}

#[test]
fn residual_rejects_malformed_grid() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "not json").unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let out = qmock(&["residual", "--check", "ramanujan", "--grid-file", &path]);
    assert_eq!(out.status.code(), Some(64));
}
