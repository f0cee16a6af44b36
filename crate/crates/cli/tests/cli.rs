use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubeharm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn coeff_all_routes_agree() {
    let o = run(&["coeff", "--n", "2", "--m", "1", "--k", "1", "--route", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for route in ["oracle", "matrix", "partition", "young", "generating", "recursion", "extremal"] {
        let line = text.lines().find(|l| l.starts_with(route)).unwrap();
        assert_eq!(line.split_whitespace().nth(1), Some("2"), "{line}");
    }
    assert!(text.contains("all routes agree"));
}

#[test]
fn coeff_single_route_json() {
    let o = run(&["coeff", "--n", "3", "--m", "2", "--k", "1", "--route", "young", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["records"][0]["value"], "28/3");
    assert_eq!(v["records"][0]["route"], "young");
}

#[test]
fn coeff_outside_closed_forms_skips_extremal() {
    let o = run(&["coeff", "--n", "6", "--m", "2", "--k", "2", "--route", "partition"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["coeff", "--n", "6", "--m", "2", "--k", "2", "--route", "extremal"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    assert_eq!(run(&["coeff", "--n", "1", "--m", "2", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--n", "2", "--m", "1", "--k", "3"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--n", "2", "--m", "1", "--k", "1", "--route", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["coeff", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--m", "3", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "identities", "--order", "5"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "dimension", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--n", "7"]).status.code(), Some(2));
    let o = run(&["coeff", "--n", "1", "--m", "2", "--k", "0"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 <= m <= n"));
}

#[test]
fn table_json_records() {
    let o = run(&["table", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 8);
    let first = &records[2];
    assert_eq!((first["n"].as_u64(), first["m"].as_u64(), first["k"].as_u64()), (Some(2), Some(1), Some(0)));
    assert_eq!(first["value"], "1");
    assert!(first["routesAgreeing"].as_array().unwrap().len() >= 6);

    let o = run(&["table", "--n", "3", "--format", "json"]);
    let v = json(&o);
    let cell = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["n"] == 3 && r["m"] == 2 && r["k"] == 1)
        .unwrap();
    assert_eq!(cell["value"], "28/3");
}

#[test]
fn table_csv_is_deterministic() {
    let a = run(&["table", "--n", "4", "--format", "csv"]);
    let b = run(&["table", "--n", "4", "--format", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,m,k,value,routesAgreeing"));
    // 1 <= m <= n <= 4, 0 <= k <= n
    assert_eq!(lines.count(), 2 + 6 + 12 + 20);
}

#[test]
fn identities_pass() {
    let o = run(&["verify", "identities", "--order", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 5);
    assert!(text.contains("--- summary ---"));
}

#[test]
fn mvp_from_file_and_delta() {
    let dir = std::env::temp_dir().join(format!("cubeharm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x1sq.json");
    std::fs::write(&path, r#"[[[2,0],"1"]]"#).unwrap();
    let o = run(&["verify", "mvp", "--n", "2", "--k", "1", "--f", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["summary"]["failed"], 1);
    assert_eq!(v["details"]["residuals"]["1"], serde_json::json!([[[0, 0, 2], "2/3"]]));

    let o = run(&["verify", "mvp", "--n", "2", "--delta"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 3);

    let o = run(&["verify", "mvp", "--n", "2", "--basis"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify", "mvp", "--n", "2"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn harmonic_suites() {
    let o = run(&["verify", "dimension", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["details"]["dimension"], 8);
    assert_eq!(run(&["verify", "annihilation", "--n", "2"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "routes", "--n", "3"]).status.code(), Some(0));
}

#[test]
fn gen_and_bernoulli_and_invariant() {
    let o = run(&["gen", "--m", "2", "--format", "json"]);
    assert_eq!(json(&o)["coefficients"], serde_json::json!(["1/90", "1/15", "1/6"]));
    let o = run(&["gen", "--m", "1", "--n", "3", "--what", "F", "--format", "json"]);
    assert_eq!(json(&o)["coefficients"], serde_json::json!(["1/2", "-1/3"]));
    let o = run(&["bernoulli", "--count", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "m,B,b\n1,1/6,1/6\n2,1/30,1/90\n3,1/42,1/945\n");
    let o = run(&["invariant", "--what", "expansion", "--n", "2", "--m", "1", "--k", "1", "--format", "json"]);
    assert_eq!(json(&o)["leading"], "2");
    let o = run(&["invariant", "--what", "delta", "--n", "2", "--format", "json"]);
    assert_eq!(json(&o)["terms"], serde_json::json!([[[3, 1], "1"], [[1, 3], "-1"]]));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("cubeharm-out-{}.csv", std::process::id()));
    let o = run(&["bernoulli", "--count", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "m,B,b\n1,1/6,1/6\n2,1/30,1/90\n");
    std::fs::remove_file(&path).ok();
}
