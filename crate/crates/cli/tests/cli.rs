use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn infeld(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infeld")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_record(o: &Output) -> Value {
    let s = String::from_utf8(o.stderr.clone()).unwrap();
    let line = s.lines().last().expect("stderr line");
    serde_json::from_str(line).expect("stderr is one JSON record")
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn report(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is the JSON report")
}

fn result<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["results"].as_array().unwrap().iter().find(|m| m["name"] == name).expect(name)
}

#[test]
fn ising_sweep_prints_delta_column() {
    let o = infeld(&["ising", "--q", "0.5", "--n", "16", "--betaH", "0.25,0.5,1.0"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&stdout(&o));
    assert_eq!(t[0], ["betaH", "brute", "thermo", "abs_delta"]);
    assert_eq!(t.len(), 4);
    for r in &t[1..] {
        let delta: f64 = r[3].parse().unwrap();
        assert!(delta < 0.02);
    }
}

#[test]
fn coherent_fourier_plus_succeeds() {
    let o = infeld(&["coherent", "--flavor", "fourier_plus", "--alpha", "1+0i", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["command"], "coherent");
    assert!(r["results"].as_array().unwrap().iter().all(|m| m["pass"] == true));
}

#[test]
fn soliton_writes_potential_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = infeld(&["soliton", "--k", "1,2", "--theta0", "0,0", "--grid", "-25:25:5001", "--t", "0", "--out", out]);
    assert_eq!(code(&o), 0);
    let u = fs::read_to_string(dir.path().join("u.csv")).unwrap();
    let t = rows(&u);
    assert_eq!(t[0], ["x", "value"]);
    assert_eq!(t.len(), 5002);
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    for (name, want) in [("eigenvalue[0]", -1.0), ("eigenvalue[1]", -0.25)] {
        let v = result(&r, name)["value"].as_f64().unwrap();
        assert!((v - want).abs() < 1e-4, "{name} = {v}");
    }
    assert_eq!(stdout(&o), u);
}

#[test]
fn selfsim_and_toda_pass_defaults() {
    for cmd in ["selfsim", "toda"] {
        let o = infeld(&[cmd, "--format", "json"]);
        assert_eq!(code(&o), 0, "{cmd}");
        assert_eq!(report(&o)["command"], cmd);
    }
}

#[test]
fn spectrum_reads_sampled_potential() {
    let dir = tempfile::tempdir().unwrap();
    let o = infeld(&["soliton", "--k", "1,2", "--grid", "-60:60:12001", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let input = dir.path().join("u.csv");
    let o = infeld(&["spectrum", "--input", input.to_str().unwrap(), "--count", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let t = rows(&stdout(&o));
    assert_eq!(t[0], ["index", "value", "boundary_ratio"]);
    let e0: f64 = t[1][1].parse().unwrap();
    assert!((e0 + 1.0).abs() < 1e-4);
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["ising", "--q", "2"][..],
        &["soliton"],
        &["soliton", "--k", "1", "--grid", "0:1"],
        &["coherent", "--alpha", "1+xi"],
        &["coherent", "--flavor", "titulaer_glauber"],
        &["nonsense"],
        &["spectrum", "--input", "/nonexistent/file.csv"],
    ] {
        let o = infeld(args);
        assert_eq!(code(&o), 2, "{args:?}");
        let rec = stderr_record(&o);
        assert_eq!(rec["error"], "bad_input");
        assert_eq!(rec["code"], 2);
    }
}

#[test]
fn tolerance_failure_exits_three_and_still_reports() {
    let o = infeld(&["ising", "--tol", "1e-9"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("betaH,"));
    let rec = stderr_record(&o);
    assert_eq!(rec["error"], "tolerance");
    assert_eq!(rec["failed"].as_array().unwrap().len(), 3);
}

#[test]
fn numeric_failure_exits_four() {
    let o = infeld(&["toda", "--measure", "three_point", "--lambda1", "0.5"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stderr_record(&o)["error"], "numeric");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"command": "ising", "format": "json", "params": {"q": 0.5, "n": 12, "betaH": [0.5]}}"#,
    );
    let o = infeld(&["ising", "--config", &cfg]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["params"]["n"], 12);
    assert_eq!(r["params"]["betaH"].as_array().unwrap().len(), 1);

    let o = infeld(&["ising", "--config", &cfg, "--n", "10", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("betaH,"));
    let o = infeld(&["ising", "--config", &cfg, "--n", "10"]);
    assert_eq!(report(&o)["params"]["n"], 10);
}

#[test]
fn config_rejects_unknown_keys_and_wrong_command() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"params": {"q": 0.5, "temperature": 1}}"#,
        r#"{"colour": "red"}"#,
        r#"{"command": "soliton", "params": {}}"#,
        r#"{"params": {"q": "half"}}"#,
        "not json",
    ];
    for (i, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("c{i}.json"), text);
        let o = infeld(&["ising", "--config", &cfg]);
        assert_eq!(code(&o), 2, "{text}");
        assert_eq!(stderr_record(&o)["error"], "bad_input");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["soliton", "--k", "0.8,1.3", "--theta0", "0.2,-0.4", "--t", "0.5", "--format", "json"];
    let a = infeld(&args);
    let b = infeld(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn toda_table_leaves_undefined_cells_empty() {
    let o = infeld(&["toda", "--points", "-1,0,1", "--weights", "1,1,1"]);
    assert_eq!(code(&o), 0);
    let t = rows(&stdout(&o));
    assert_eq!(t[0], ["n", "b", "u", "b_1", "u_1", "b_2", "u_2"]);
    assert_eq!(t.len(), 4);
    assert_eq!(t[1][2], "");
    assert_eq!(t[3][3], "");
    assert!(t.iter().all(|r| r.len() == 7));
}

#[test]
fn help_exits_zero() {
    let o = infeld(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("soliton"));
}
