use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ortholog"));
    c.env_remove("ORTHOLOG_TOL_SCALE");
    c
}

fn run(args: &[&str]) -> Output {
    cli().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = cli()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn data_of(v: &Value) -> Vec<f64> {
    v["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn plog_pipes_into_exp() {
    let plog = run(&["plog", &data("neg_i2.json")]);
    assert!(plog.status.success());
    let exp = run_stdin(&["exp", "-"], &plog.stdout);
    assert!(exp.status.success());
    let r = data_of(&json(&exp));
    for (got, want) in r.iter().zip([-1.0, 0.0, 0.0, -1.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn plog_of_minus_identity_lists_both_points() {
    let v = json(&run(&["plog", &data("neg_i2.json")]));
    assert_eq!(v["structure"], "TwoPoints");
    let logs = v["logs"].as_array().unwrap();
    let tops: Vec<f64> = logs.iter().map(|l| data_of(l)[1]).collect();
    assert!(tops.iter().any(|t| (t - PI).abs() < 1e-12));
    assert!(tops.iter().any(|t| (t + PI).abs() < 1e-12));

    let v = json(&run(&["plog", &data("neg_i4.json")]));
    assert_eq!(v["structure"], "Manifold");
    assert_eq!(v["mu"], 2);
    assert_eq!(v["dim"], 2);
}

#[test]
fn text_matrices_are_accepted() {
    let v = json(&run(&["canon", &data("quarter_turn.txt")]));
    assert!((v["thetas"][0].as_f64().unwrap() - PI / 2.0).abs() < 1e-12);
    assert_eq!(v["fixed_dim"], 0);
}

#[test]
fn domain_error_exits_two_with_error_object() {
    let out = run(&["logs", &data("neg_i4.json"), "--radius", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "domain");
    assert!(err["message"].as_str().unwrap().contains("generic"));

    let out = run(&["dist", &data("i2.json"), &data("not_orth.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "precondition");
}

#[test]
fn parse_and_io_errors_exit_one() {
    let out = run(&["pfaffian", &data("garbage.txt")]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "parse");

    let out = run(&["pfaffian", "/nonexistent/matrix.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "io");
}

#[test]
fn bad_scale_variable_is_a_parse_error() {
    let out = cli()
        .args(["diameter", "3"])
        .env("ORTHOLOG_TOL_SCALE", "lots")
        .output()
        .unwrap();
    // diameter takes no tolerances, so the variable is never read
    assert!(out.status.success());
    let out = cli()
        .args(["dist", &data("i2.json"), &data("neg_i2.json")])
        .env("ORTHOLOG_TOL_SCALE", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_flags_reach_the_library() {
    // a perturbed rotation passes at the default scale but not with a tiny orth_tol
    let path = std::env::temp_dir().join("ortholog_cli_perturbed.json");
    std::fs::write(&path, r#"{"n":2,"data":[1e-10,1,-1,0]}"#).unwrap();
    let p = path.to_string_lossy().into_owned();
    assert!(run(&["canon", &p]).status.success());
    let out = run(&["canon", &p, "--tol-orth", "1e-14"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli()
        .args(["canon", &p])
        .env("ORTHOLOG_TOL_SCALE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geodesic_csv_layout() {
    let out = run(&[
        "geodesic",
        &data("i2.json"),
        &data("quarter_log.json"),
        "--samples",
        "3",
        "--t-min",
        "-1",
        "--t-max",
        "1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "t,a00,a01,a10,a11");
    let mid: Vec<f64> = lines[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(mid, vec![0.0, 1.0, 0.0, 0.0, 1.0]);
    let last: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[2] - 1.0).abs() < 1e-15);
}

#[test]
fn geodesic_json_reports_periodicity() {
    let v = json(&run(&[
        "geodesic",
        &data("i4.json"),
        &data("periodic_gen.json"),
        "--samples",
        "0",
    ]));
    let t = v["periodicity"]["Periodic"]["period"].as_f64().unwrap();
    assert!((t - 2.0 * PI).abs() < 1e-12);
    assert_eq!(v["is_principal"], true);
}

#[test]
fn sampling_requires_seed_and_is_reproducible() {
    let out = run(&["sample-aplog", &data("neg_i4.json"), "--count", "4"]);
    assert!(!out.status.success());
    let a = run(&[
        "sample-aplog",
        &data("neg_i4.json"),
        "--count",
        "4",
        "--seed",
        "1",
    ]);
    let b = run(&[
        "sample-aplog",
        &data("neg_i4.json"),
        "--count",
        "4",
        "--seed",
        "1",
    ]);
    let c = run(&[
        "sample-aplog",
        &data("neg_i4.json"),
        "--count",
        "4",
        "--seed",
        "2",
    ]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let comps: Vec<i64> = json(&a)["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["component"].as_i64().unwrap())
        .collect();
    assert_eq!(comps, vec![1, -1, 1, -1]);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join("ortholog_cli_out.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&["diameter", "2", "--out", &path.to_string_lossy()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((v["diameter"].as_f64().unwrap() - PI * 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn curvature_without_planes_gives_constants() {
    let v = json(&run(&["curvature", "4"]));
    assert_eq!(v["ricci_coeff"], 0.5);
    assert_eq!(v["scalar"], 3.0);
    assert!(v.get("sectional").is_none());
    let out = run(&["curvature", "3", &data("x3.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_log_reports_failure_reason() {
    let v = json(&run(&[
        "verify-log",
        &data("quarter_turn.txt"),
        &data("x3.json"),
    ]));
    assert_eq!(v["ok"], false);
    assert_eq!(v["reason"], "not_skew");
    let v = json(&run(&[
        "verify-log",
        &data("neg_i2.json"),
        &data("quarter_log.json"),
    ]));
    assert_eq!(v["ok"], false);
    assert_eq!(v["reason"], "exp_mismatch");
}
