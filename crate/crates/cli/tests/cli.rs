use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn incid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_incid")).args(args).env_remove("INCID_OUT_DIR").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn lattice_count_prints_220() {
    let out = incid(&["lattice", "--n", "64", "--count"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "220\n");
}

#[test]
fn small_grid_with_huge_thresholds_is_one_region() {
    let out = incid(&["rdiv", "--grid", "5x5", "--r", "1000000", "--t", "1000000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let report = &doc["result"]["report"];
    assert_eq!(report["region_count"], 1);
    assert_eq!(report["regions"][0]["vertices"], 25);
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(doc["manifest"]["command"], "rdiv");
}

/// Drops one edge from the region holding it, keeping the region's vertex
/// list valid, and returns the edge.
fn drop_edge(path: &Path) -> u64 {
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let edges: Vec<[u64; 2]> = serde_json::from_value(doc["graph"]["edges"].clone()).unwrap();
    let region = &mut doc["division"]["regions"][0];
    let list: Vec<u64> = serde_json::from_value(region["edges"].clone()).unwrap();
    let touches = |v: u64| list.iter().filter(|&&e| edges[e as usize].contains(&v)).count();
    let victim = *list.iter().find(|&&e| edges[e as usize].iter().all(|&v| touches(v) > 1)).unwrap();
    region["edges"] = list.iter().copied().filter(|&e| e != victim).collect();
    fs::write(path, serde_json::to_string(&doc).unwrap()).unwrap();
    victim
}

#[test]
fn verify_names_an_uncovered_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("division.json");
    let p = path.to_str().unwrap();
    let out = incid(&["rdiv", "--grid", "6", "--r", "16", "--t", "4", "--p", "all", "--division-out", p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(incid(&["verify", "--division", p]).status.code(), Some(0));

    let edge = drop_edge(&path);
    let out = incid(&["verify", "--division", p]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("edge {edge} is covered by no region")), "{err}");
    let failures = &stdout_json(&out)["result"]["report"]["failures"];
    assert!(failures.as_array().unwrap().iter().any(|f| f["kind"] == "edge_coverage" && f["edge"] == edge));
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(incid(&["lattice", "--n", "63"]).status.code(), Some(1));
    assert_eq!(incid(&["lattice"]).status.code(), Some(1));
    assert_eq!(incid(&["verify", "--division", "/nonexistent/division.json"]).status.code(), Some(1));
    assert_eq!(incid(&["forbid-scan", "--lattice", "64", "--s", "3"]).status.code(), Some(1));
    assert_eq!(incid(&["rdiv", "--grid", "5", "--r", "4"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("graph.json");
    fs::write(&bad, "{\"n\": 3,\n \"edges\": [[0, 1]],\n oops}").unwrap();
    let out = incid(&["rdiv", "--graph", bad.to_str().unwrap(), "--r", "16"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("graph.json") && err.contains("line 3"), "{err}");
}

#[test]
fn forbidden_configuration_exits_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("triangle.json");
    fs::write(&input, r#"{"point_count": 3, "curves": [[0, 1], [1, 2], [0, 2]], "k": 1}"#).unwrap();
    let out = incid(&["forbid-scan", "--input", input.to_str().unwrap(), "--s", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[0, 1, 2]"));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["witness_verified"], true);

    fs::write(&input, r#"{"point_count": 3, "curves": [[0, 1, 2]]}"#).unwrap();
    let out = incid(&["forbid-scan", "--input", input.to_str().unwrap(), "--s", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["found"], false);
}

#[test]
fn csv_columns_are_documented_and_emitted() {
    let commands = ["rdiv", "verify", "arrange", "lattice", "lower-bound", "forbid-scan", "pipeline"];
    for cmd in commands {
        let help = String::from_utf8(incid(&[cmd, "--help"]).stdout).unwrap();
        assert!(help.contains("schema version 1"), "{cmd}");
    }
    let out = incid(&["lower-bound", "--n", "64", "--s", "3", "--seeds", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let manifest: Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# manifest: ").unwrap()).unwrap();
    assert_eq!(manifest["schema_version"], 1);
    assert_eq!(manifest["config"]["seed"], 0);
    let header = lines.next().unwrap();
    let help = String::from_utf8(incid(&["lower-bound", "--help"]).stdout).unwrap();
    for column in header.split(',') {
        assert!(help.lines().any(|l| l.trim_start().starts_with(column)), "{column} undocumented");
    }
    assert_eq!(lines.count(), 2);
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_incid"))
        .args(["lattice", "--n", "8", "--format", "csv"])
        .env("INCID_OUT_DIR", dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("lattice.csv")).unwrap();
    assert!(text.starts_with("# manifest: "));
    assert!(text.contains("\n8,2,15,15,"));
}

#[test]
fn arrange_reports_exact_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let geo = dir.path().join("geometry.json");
    fs::write(&geo, r#"{"curves": [{"a": "1/2", "b": "0"}, {"a": "-1", "b": "3"}], "points": [["2", "1"]]}"#).unwrap();
    let out = incid(&["arrange", "--geometry", geo.to_str().unwrap(), "--gadget", "0", "--w", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let result = &doc["result"];
    assert_eq!(result["coords"][0], serde_json::json!(["2/1", "1/1"]));
    // one point on two lines: 2 * w * 2 gadget vertices
    assert_eq!(result["kind"].as_array().unwrap().iter().filter(|k| k.get("gadget").is_some()).count(), 8);
    assert_eq!(result["counts"]["euler_holds"], true);
    assert_eq!(result["graph"]["P"], serde_json::json!([0]));
    assert!(doc["manifest"]["inputs"].as_object().unwrap().values().all(|d| d.as_str().unwrap().len() == 64));
}

#[test]
fn pipeline_runs_end_to_end() {
    let out = incid(&["pipeline", "--n", "64", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("part,points,curves,copies"));
}
