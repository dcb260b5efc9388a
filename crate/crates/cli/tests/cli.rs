//! End-to-end tests of the binary: exit codes, determinism, and the
//! wire formats of each subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_utmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("utmatch-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

fn family_json(name: &str, n: u32) -> String {
    let out = run(&["family", name, "--n", &n.to_string()]);
    assert!(out.status.success(), "family {name} failed");
    stdout(&out)
}

#[test]
fn dim_table_is_deterministic_and_passes() {
    let a = run(&["dim", "--max-n", "4"]);
    let b = run(&["dim", "--max-n", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("id-matching"));
    assert!(text.ends_with("PASS\n"));
}

#[test]
fn dim_csv_schema() {
    let out = run(&["dim", "--max-n", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,n,field,dimension"));
    assert!(text.contains("id,3,Q,8"));
    assert!(text.contains("total,3,Q,4"));
    assert!(text.contains("compat,3,Q,10"));
}

#[test]
fn dim_over_prime_field() {
    let out = run(&["dim", "--max-n", "3", "--field", "Fp:5", "--format", "csv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("12,3,Fp:5,6"));
}

#[test]
fn verify_passes_for_each_kind() {
    for kind in ["id", "12", "inter", "total"] {
        let out = run(&["verify", "--kind", kind, "--n", "4"]);
        assert!(out.status.success(), "verify {kind} failed");
        assert!(stdout(&out).ends_with("PASS\n"));
    }
}

#[test]
fn verify_rejects_compat() {
    let out = run(&["verify", "--kind", "compat", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_roundtrips_through_check() {
    let json = family_json("Mid1[2,1]", 3);
    assert!(json.contains("\"a\""));
    let path = write_temp("mid1.json", &json);
    let out = run(&["check", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("id-matching          PASS"), "{text}");
    assert!(text.contains("associative: yes"));
}

#[test]
fn check_reports_failures_with_counterexample() {
    // id-matching (a sum of the two one-sided unit actions) but not
    // associative: the associator at (e12, e12, e23) is e13
    let json = r#"{
  "n": 3,
  "field": "Q",
  "entries": [
    { "a": [1, 2], "b": [1, 2], "out": [[[1, 3], "1"]] },
    { "a": [1, 3], "b": [2, 3], "out": [[[1, 3], "1"]] },
    { "a": [2, 3], "b": [2, 3], "out": [[[2, 3], "1"]] }
  ]
}"#;
    let path = write_temp("nonassoc.json", json);
    let out = run(&["check", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["associative"], false);
    let kinds = parsed["kinds"].as_array().unwrap();
    let id_entry = kinds.iter().find(|k| k["kind"] == "id").unwrap();
    assert_eq!(id_entry["pass"], true);
    let inter_entry = kinds.iter().find(|k| k["kind"] == "inter").unwrap();
    assert_eq!(inter_entry["pass"], false);
    assert!(inter_entry["first"]["equation"].as_str().is_some());
}

#[test]
fn check_rejects_bad_json() {
    let path = write_temp("broken.json", "{ not json");
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify3_zero_product_is_case_8() {
    let path = write_temp("zero.json", r#"{"n":3,"field":"Q","entries":[]}"#);
    let out = run(&["classify3", "--kind", "id", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["case"], 8);
    assert_eq!(parsed["params"], serde_json::json!(["0", "0"]));
    assert_eq!(parsed["witness"]["a11"], "1");
}

#[test]
fn classify3_canonical_structures_are_fixed_points() {
    // Mid1[2,1] on UT_3 is the representative of case 6.
    let json = family_json("Mid1[2,1]", 3);
    let path = write_temp("case6.json", &json);
    let out = run(&["classify3", "--kind", "id", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["case"], 6);
    assert_eq!(parsed["witness"]["a11"], "1");
    assert_eq!(parsed["witness"]["a31"], "0");
}

#[test]
fn classify3_rejects_non_members() {
    // the (12)-matching structure M12_2[1] is not an id-matching solution
    let json = family_json("M12_2[1]", 3);
    let path = write_temp("off-kernel.json", &json);
    let out = run(&["classify3", "--kind", "id", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn classify3_rejects_nonassociative_members() {
    let json = r#"{
  "n": 3,
  "field": "Q",
  "entries": [
    { "a": [1, 2], "b": [1, 2], "out": [[[1, 3], "1"]] },
    { "a": [1, 3], "b": [2, 3], "out": [[[1, 3], "1"]] },
    { "a": [2, 3], "b": [2, 3], "out": [[[2, 3], "1"]] }
  ]
}"#;
    let path = write_temp("nonassoc2.json", json);
    let out = run(&["classify3", "--kind", "id", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not associative"), "{err}");
}

#[test]
fn orbits_census_csv() {
    let out = run(&["orbits", "--kind", "inter", "--field", "Fp:2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,q,case,params,orbit_size"));
    // 16 associative survivors, every orbit a singleton over F_2
    assert_eq!(text.lines().count(), 17);
    assert!(text.contains("inter,2,1,"));
}

#[test]
fn orbits_rejects_rationals() {
    let out = run(&["orbits", "--kind", "id", "--field", "Q"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernel_export_shape() {
    let out = run(&["kernel", "--kind", "total", "--n", "3"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["dimension"], 4);
    assert_eq!(parsed["kind"], "total");
    assert_eq!(parsed["basis"].as_array().unwrap().len(), 4);
}

#[test]
fn transform_involution_on_known_family() {
    // flip transport carries M12_2[1] on UT_4 onto M12_2[3]
    let json = family_json("M12_2[1]", 4);
    let path = write_temp("m12.json", &json);
    let out = run(&["transform", path.to_str().unwrap(), "--involution"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), family_json("M12_2[3]", 4).trim_end());
}

#[test]
fn transform_aut3_fixes_canonical_product() {
    let out = run(&["family", "T2", "--n", "3"]);
    let path = write_temp("dot.json", &stdout(&out));
    let moved = run(&[
        "transform",
        path.to_str().unwrap(),
        "--aut3",
        "2,3,-1,5",
    ]);
    assert!(moved.status.success());
    assert_eq!(stdout(&moved).trim_end(), stdout(&out).trim_end());
}

#[test]
fn family_rejects_excluded_indices() {
    let out = run(&["family", "Mid2[2,2]", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("excluded"), "{err}");
}

#[test]
fn max_n_guard() {
    let out = run(&["dim", "--max-n", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("utmatch-out-{}.csv", std::process::id()));
    let out = run(&[
        "dim",
        "--max-n",
        "3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("kind,n,field,dimension"));
    std::fs::remove_file(&path).ok();
}
