use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperdet(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperdet"))
        .args(args)
        .env("HYPERDET_CACHE_DIR", cache)
        .env_remove("HYPERDET_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn asm_count_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperdet(dir.path(), &["asm", "count", "--n", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "7436");
    let o = hyperdet(dir.path(), &["asm", "count", "--n", "5", "--enumerate"]);
    assert_eq!(stdout(&o).trim(), "429");
    let o = hyperdet(dir.path(), &["asm", "stats", "--n", "3", "--json"]);
    let v = json(&o);
    assert_eq!(v["count"], 7);
    assert_eq!(v["negatives"]["1"], 1);
}

#[test]
fn asm_list_round_trips_through_stats() {
    let dir = tempfile::tempdir().unwrap();
    let listed = hyperdet(dir.path(), &["asm", "list", "--n", "4", "--json"]);
    assert_eq!(json(&listed).as_array().unwrap().len(), 42);
    let file = dir.path().join("alt4.json");
    std::fs::write(&file, &listed.stdout).unwrap();
    let from_file = hyperdet(
        dir.path(),
        &["asm", "stats", "--input", file.to_str().unwrap(), "--json"],
    );
    let direct = hyperdet(dir.path(), &["asm", "stats", "--n", "4", "--json"]);
    assert_eq!(json(&from_file), json(&direct));
}

#[test]
fn macdonald_prints_e2() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperdet(dir.path(), &["macdonald", "--partition", "1,1", "--m", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "(1/2)*p[1,1] + (-1/2)*p[2]");
    let o = hyperdet(
        dir.path(),
        &["macdonald", "--partition", "1,1", "--m", "1", "--basis", "m"],
    );
    assert_eq!(stdout(&o).trim(), "m[1,1]");
}

#[test]
fn macdonald_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperdet(dir.path(), &["macdonald", "--partition", "2,1", "--m", "2", "--json"]);
    let first = json(&o);
    assert_eq!(first["basis"], "p");
    assert_eq!(first["degree"], 3);
    let file = dir.path().join("q21.json");
    std::fs::write(&file, &o.stdout).unwrap();
    let back = hyperdet(dir.path(), &["macdonald", "--input", file.to_str().unwrap(), "--json"]);
    assert_eq!(json(&back)["coeffs"], first["coeffs"]);
    let in_m = hyperdet(
        dir.path(),
        &["macdonald", "--input", file.to_str().unwrap(), "--basis", "m", "--json"],
    );
    assert_eq!(json(&in_m)["basis"], "m");
}

#[test]
fn dyson_matches_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperdet(dir.path(), &["dyson", "--k", "1", "--s", "2", "--m", "1"]);
    assert_eq!(stdout(&o).trim(), "((q + 1)/2)*p[1,1] + ((-q - 1)/2)*p[2]");
}

#[test]
fn det_symbolic_vandermonde() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("v.json");
    std::fs::write(
        &file,
        r#"{"n":3,"entries":[["1","x1","x1^2"],["1","x2","x2^2"],["1","x3","x3^2"]]}"#,
    )
    .unwrap();
    let o = hyperdet(dir.path(), &["det", "--matrix", file.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("(λ^2 - λ)*x1*x2*x3"));
    let o = hyperdet(
        dir.path(),
        &["det", "--lambda", "-1", "--matrix", file.to_str().unwrap(), "--json"],
    );
    assert_eq!(json(&o)["variables"], serde_json::json!(["x1", "x2", "x3"]));
}

#[test]
fn hyperdet_modes_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("h.json");
    std::fs::write(
        &file,
        r#"{"n":2,"dim":4,"entries":[{"index":[1,1,1,1],"value":"2"},{"index":[2,2,2,2],"value":"3/2"},{"index":[1,2,1,2],"value":"1"}]}"#,
    )
    .unwrap();
    let path = file.to_str().unwrap();
    let cayley = hyperdet(dir.path(), &["hyperdet", "--mode", "cayley", "--input", path]);
    assert_eq!(stdout(&cayley).trim(), "3");
    let at_one = hyperdet(dir.path(), &["hyperdet", "--lambda", "1", "--input", path]);
    assert_eq!(stdout(&at_one).trim(), "3");

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperdet"));
    let o = cmd
        .args(["hyperdet", "--input", path])
        .env("HYPERDET_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperdet"));
    let o = cmd
        .args(["--budget", "1000", "hyperdet", "--input", path])
        .env("HYPERDET_BUDGET", "5")
        .output()
        .unwrap();
    assert!(o.status.success(), "the flag overrides the environment: {}", stderr(&o));
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperdet(dir.path(), &["verify", "det3-display", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)[0]["status"], "discrepancy-documented");

    let o = hyperdet(
        dir.path(),
        &[
            "verify",
            "rectangular-hyperdet",
            "--k",
            "1",
            "--s",
            "3",
            "--m",
            "2",
            "--json",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let reports = json(&o);
    let status: Vec<_> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["convention"].clone(), r["status"].clone()))
        .collect();
    assert!(status.contains(&(Value::from("paper"), Value::from("discrepancy-documented"))));
    assert!(status.contains(&(Value::from("proof"), Value::from("pass"))));

    let o = hyperdet(
        dir.path(),
        &[
            "verify",
            "rectangular-hyperdet",
            "--k",
            "1",
            "--s",
            "3",
            "--m",
            "2",
            "--convention",
            "paper",
            "--json",
        ],
    );
    assert_eq!(json(&o).as_array().unwrap().len(), 1);

    let o = hyperdet(dir.path(), &["verify", "schur-pfaffian", "--n", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hyperdet(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        hyperdet(dir.path(), &["verify", "no-such-identity"]).status.code(),
        Some(2)
    );
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = hyperdet(dir.path(), &["hyperdet", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json"));
    assert_eq!(
        hyperdet(dir.path(), &["macdonald", "--partition", "1,2", "--m", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let o = hyperdet(&cache, &["cache", "clear"]);
    assert!(o.status.success());
    let o = hyperdet(&cache, &["cache", "stat", "--json"]);
    assert_eq!(json(&o), serde_json::json!([]));

    hyperdet(&cache, &["macdonald", "--partition", "2,1", "--m", "2"]);
    let o = hyperdet(&cache, &["cache", "stat", "--json"]);
    assert_eq!(json(&o), serde_json::json!([{ "m": 2, "partitions": [[2, 1]] }]));

    let o = hyperdet(&cache, &["cache", "export", "--m", "2"]);
    let file = json(&o);
    assert_eq!(file["m"], 2);
    assert_eq!(file["basis"], "p");
    let entry = file["entries"]["[2,1]"].as_object().unwrap();
    let keys: Vec<_> = entry.keys().cloned().collect();
    assert_eq!(keys, vec!["[1,1,1]", "[2,1]", "[3]"]);
    assert!(entry.values().all(Value::is_string));

    let other = dir.path().join("other");
    let o = hyperdet(
        &cache,
        &["--cache-dir", other.to_str().unwrap(), "cache", "stat", "--json"],
    );
    assert_eq!(json(&o), serde_json::json!([]), "the flag overrides the environment");

    hyperdet(&cache, &["cache", "clear"]);
    let o = hyperdet(&cache, &["cache", "stat"]);
    assert!(stdout(&o).contains("is empty"));
}
