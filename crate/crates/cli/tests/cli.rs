use std::process::{Command, Output};

use serde_json::Value;

fn srbkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srbkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn roots_a2_lists_three_positive_roots() {
    let o = srbkit(&["roots", "--family", "A", "--rank", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["positiveRoots"].as_array().unwrap().len(), 3);
    let text = stdout(&srbkit(&["roots", "--family", "A", "--rank", "2"]));
    assert!(text.contains("positive roots (3)"));
}

#[test]
fn roots_e6_is_unsupported() {
    let o = srbkit(&["roots", "--family", "E", "--rank", "6"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported"));
}

#[test]
fn roots_g2_json_schema() {
    let o = srbkit(&["roots", "--family", "G", "--rank", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["family", "rank", "positiveRoots", "gramDual", "cartan", "coxeterNumber", "exponents", "simpleReflections"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["coxeterNumber"], 6);
    assert_eq!(v["positiveRoots"].as_array().unwrap().len(), 6);
}

#[test]
fn arr_counts() {
    let o = srbkit(&["arr", "--family", "A", "--rank", "2", "-k", "1", "--cone", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["forms"].as_array().unwrap().len(), 7);
    let o = srbkit(&["arr", "--family", "A", "--rank", "2", "--gamma", "1,2", "--sign", "plus", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["forms"].as_array().unwrap().len(), 9);
    let o = srbkit(&["arr", "--family", "B", "--rank", "2", "-k", "2", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["hyperplanes"].as_array().unwrap().len(), 16);
}

#[test]
fn srb_a2_degrees() {
    let o = srbkit(&["srb", "--family", "A", "--rank", "2", "-k", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["plus", "minus"] {
        let list = v[key].as_array().unwrap();
        assert_eq!(list.len(), 2);
        for d in list {
            assert_eq!(d["degree"], 3);
        }
    }
}

#[test]
fn srb_a1_text_shows_factored_coefficient() {
    let o = srbkit(&["srb", "--family", "A", "--rank", "1", "-k", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x1*(x1 - z)"), "{}", stdout(&o));
}

#[test]
fn srb_b2_k2_degree_eight() {
    let o = srbkit(&["srb", "--family", "B", "--rank", "2", "-k", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["plus"].as_array().unwrap().iter().all(|d| d["degree"] == 8));
}

#[test]
fn verify_all_a2() {
    let o = srbkit(&["verify", "--family", "A", "--rank", "2", "-k", "1", "--suite", "all", "--json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn verify_g2_simplefree() {
    let o = srbkit(&["verify", "--family", "G", "--rank", "2", "-k", "1", "--suite", "simplefree", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v[0]["checks"].as_array().unwrap();
    let count = |prefix: &str| {
        checks
            .iter()
            .filter(|c| c["detail"].as_str().unwrap().starts_with(prefix))
            .count()
    };
    // each root is checked once added and once deleted
    assert_eq!(count("Free"), 2 * 2);
    assert_eq!(count("NotFree"), 2 * 4);
}

#[test]
fn verify_bogus_suite_is_usage_error() {
    let o = srbkit(&["verify", "--family", "A", "--rank", "2", "-k", "1", "--suite", "bogus"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_reads_written_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    let p = path.to_str().unwrap();
    let o = srbkit(&["srb", "--family", "A", "--rank", "2", "-k", "1", "--json", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());

    let suites = "characterization,keuler,reflections";
    let from_file = srbkit(&[
        "verify", "--family", "A", "--rank", "2", "-k", "1", "--suite", suites, "--input", p, "--json",
    ]);
    let fresh = srbkit(&["verify", "--family", "A", "--rank", "2", "-k", "1", "--suite", suites, "--json"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, fresh.stdout);
}

#[test]
fn verify_rejects_tampered_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.json");
    let o = srbkit(&["srb", "--family", "A", "--rank", "2", "-k", "1", "--json"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["eta"] = v["plus"][0].clone();
    v["eta"]["degree"] = Value::from(3);
    std::fs::write(&path, v.to_string()).unwrap();
    let o = srbkit(&[
        "verify", "--family", "A", "--rank", "2", "-k", "1", "--suite", "keuler", "--input",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness"));
}

fn verdict(extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["freeness", "--family", "A", "--rank", "2", "-k", "1"];
    args.extend_from_slice(extra);
    let o = srbkit(&args);
    (code(&o), serde_json::from_str(&stdout(&o)).unwrap())
}

#[test]
fn freeness_examples() {
    let (c, v) = verdict(&["--add-root", "1,1"]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "NotFree");

    let (c, v) = verdict(&["--delete-root", "1,0"]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "Free");
    assert_eq!(v["exponents"], serde_json::json!([1, 2, 3]));

    let (c, v) = verdict(&[]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "Free");
    assert_eq!(v["exponents"], serde_json::json!([1, 3, 3]));
}

#[test]
fn freeness_rejects_non_root() {
    let o = srbkit(&["freeness", "--family", "A", "--rank", "2", "--add-root", "2,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["srb", "--family", "B", "--rank", "2", "-k", "1", "--json"];
    assert_eq!(srbkit(&args).stdout, srbkit(&args).stdout);
    let args = ["freeness", "--family", "A", "--rank", "2", "--add-root", "1,1", "--seed", "7"];
    assert_eq!(srbkit(&args).stdout, srbkit(&args).stdout);
}
