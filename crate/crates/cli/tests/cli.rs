use std::path::Path;
use std::process::{Command, Output};

use hsd::search::load_table;
use serde_json::{json, Value};

fn hsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsd")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn field_card() {
    let v = stdout_json(&hsd(&["field", "--q2", "16"]));
    assert_eq!((v["p"].as_u64(), v["m"].as_u64(), v["q"].as_u64()), (Some(2), Some(2), Some(4)));
}

#[test]
fn mindist_of_a_repetition_pair() {
    let dir = tempfile::tempdir().unwrap();
    let code = json!({ "q2": 4, "rows": 2, "cols": 4, "data": [["1","0","1","0"], ["0","1","0","1"]] });
    let file = write(dir.path(), "c.json", &code);
    let v = stdout_json(&hsd(&["mindist", &file]));
    assert_eq!(v["d"], 2);
    assert_eq!(v["method"], "exhaustive");
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = hsd(&["construct", "--q2", "9", "--n", "5", "--construction", "eq5", "--ijkl", "1,2,1,3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = stdout_json(&hsd(&["verify", out.to_str().unwrap()]));
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(10), Some(5)));
    assert_eq!(v["self_dual"], true);
}

#[test]
fn printed_mds_generator_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let row = load_table(8).unwrap().rows.into_iter().find(|r| r.label.contains("GF(64)")).unwrap();
    let file = write(dir.path(), "g.json", &serde_json::to_value(&row.spec).unwrap());
    let v = stdout_json(&hsd(&["verify", &file]));
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["mds"], true);
    let d = stdout_json(&hsd(&["mindist", &file, "--budget", "10"]));
    assert_eq!((d["d"].as_u64(), d["method"].as_str()), (Some(7), Some("mds")));
}

#[test]
fn product_code_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let mp = load_table(8).unwrap().mp.remove(0).mp;
    let file = write(dir.path(), "mp.json", &serde_json::to_value(&mp).unwrap());
    let v = stdout_json(&hsd(&["verify", &file]));
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["verdict"]["self_dual"], true);
    assert!(v["distance_lower_bound"].as_u64().unwrap() <= 14);
}

#[test]
fn reproduce_group_orders() {
    let v = stdout_json(&hsd(&["reproduce", "--table", "1"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["status"] == "REPRODUCED_EXACT"));
}

#[test]
fn search_output_ignores_thread_count() {
    let base = ["search", "--q2", "9", "--n", "4", "--s", "2", "--construction", "eq5,eq6", "--conventions", "printed,reversed"];
    let one = hsd(&[&base[..], &["--jobs", "1"]].concat());
    let eight = hsd(&[&base[..], &["--jobs", "8"]].concat());
    assert!(one.status.success());
    assert!(one.stdout.len() > 100);
    assert_eq!(one.stdout, eight.stdout);
    let jsonl = hsd(&[&base[..], &["--jsonl", "--best-only"]].concat());
    for line in String::from_utf8(jsonl.stdout).unwrap().lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn exit_codes() {
    let missing = hsd(&["verify", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"], "validation");

    let bad = hsd(&["construct", "--q2", "6", "--n", "3", "--construction", "eq5"]);
    assert_eq!(bad.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let code = json!({ "q2": 4, "rows": 2, "cols": 4, "data": [["1","0","1","0"], ["0","1","0","1"]] });
    let file = write(dir.path(), "c.json", &code);
    let over = hsd(&["mindist", &file, "--budget", "0"]);
    assert_eq!(over.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&over.stderr).unwrap();
    assert_eq!(err["error"], "budget");
}
