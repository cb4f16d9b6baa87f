use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffwave")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("cfg.json");
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL: &str =
    r#"{"problem": "example1", "schemes": ["f2oacd", "a2oacd"], "alpha0": [1.5], "N": [4, 8], "M": [4]}"#;

#[test]
fn converge_time_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("t.csv");
    let o = run(&["converge-time", "--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme,alpha0,N,M,error,rate,seconds");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("f2oacd,1.5,4,4,"));
    assert!(lines[1].contains(",,"));
}

#[test]
fn converge_space_json_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("[4, 8], \"M\": [4]", "[4], \"M\": [4, 8]"));
    let o = run(&["converge-space", "--config", &cfg, "--format", "json", "--jacobi-nodes", "32"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["axis"], "space");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_writes_field_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let field = dir.path().join("u.csv");
    let o = run(&["solve", "--config", &cfg, "--scheme", "a2oscd", "--steps", "3", "--field", field.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&field).unwrap();
    assert!(text.starts_with("x,y,value\n"));
    assert_eq!(text.lines().count(), 1 + 25);
}

#[test]
fn weights_csv_and_json() {
    let o = run(&["weights", "--kind", "chi", "--alpha0", "1.5", "--steps", "4", "--profile", "constant"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,value"));
    let first: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(first, 2f64.powf(-0.5));
    assert_eq!(text.lines().count(), 6);

    let o = run(&["weights", "--kind", "g", "--steps", "2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn bench_reports_every_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"problem": "example2", "schemes": ["f2oacd", "f2oscd"], "alpha0": [1.3], "N": [4], "M": [4, 8], "repetitions": 1}"#,
    );
    let o = run(&["bench", "--config", &cfg, "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 5);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("f2oacd", "crank"));
    let o = run(&["converge-time", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schemes[0]"));

    let o = run(&["converge-time", "--config", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_config(dir.path(), &SMALL.replace("[4, 8]", "[4, 12]"));
    assert_eq!(run(&["converge-time", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(run(&["weights", "--kind", "chi", "--alpha0", "2.5"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--config", &cfg, "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn solver_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &SMALL.replace("\"M\": [4]", "\"M\": [8], \"solver\": {\"cg_max_iter\": 1, \"cg_tol\": 1e-300}"),
    );
    let o = run(&["solve", "--config", &cfg, "--scheme", "f2oscd"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
