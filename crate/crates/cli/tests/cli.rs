//! End-to-end runs of the `rlspace` binary.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use rlspace::blocks::Decomposition;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rlspace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn spec(dir: &TempDir, name: &str, breakpoints: &[f64], values: &[f64]) -> PathBuf {
    let path = dir.path().join(name);
    let text = serde_json::json!({"type": "piecewise_constant", "breakpoints": breakpoints, "values": values});
    fs::write(&path, text.to_string()).unwrap();
    path
}

fn json_out(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Rows of a two-column CSV with exactly one header line.
fn csv_rows(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    let header = lines.next().expect("header line");
    assert_eq!(header.split(',').count(), 2);
    assert!(header.parse::<f64>().is_err());
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').expect("two columns");
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}


#[test]
fn norms() {
    let dir = TempDir::new().unwrap();
    let a = spec(&dir, "a.json", &[-1.0, 1.0], &[1.0]);
    let b = spec(&dir, "b.json", &[1.0, 2.0], &[1.0]);
    let c = spec(&dir, "c.json", &[0.0, 1.0], &[1.0]);
    let v = json_out(&run(&["norm", "--input", a.to_str().unwrap(), "--params", "1,1,2,0"]));
    assert_eq!(v["norm"], 2.0);
    let v = json_out(&run(&["norm", "--input", b.to_str().unwrap(), "--params", "1,1,2,1"]));
    assert!((v["norm"].as_f64().unwrap() - 1.5).abs() < 1e-15);
    assert_eq!(v["divergent"], false);
    let v = json_out(&run(&["norm", "--input", c.to_str().unwrap(), "--params", "1,1,2,-1"]));
    assert_eq!(v["divergent"], true);
    assert_eq!(v["norm"], "inf");
    // the profile accounts for the whole norm
    let v = json_out(&run(&["norm", "--input", b.to_str().unwrap(), "--params", "1,1,2,-0.5", "--k-range", "-4,4"]));
    let total = v["profile"]["total"].as_f64().unwrap();
    assert!((total - v["norm"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["provenance"]["config"]["command"]["norm"]["k_range"], "-4,4");
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"type": "piecewise_constant", "breakpoints": [2, 1], "values": [1]}"#).unwrap();
    assert_eq!(code(&run(&["norm", "--input", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["norm", "--input", "/nonexistent/f.json"])), 2);
    assert_eq!(code(&run(&["norm"])), 2);
    let a = spec(&dir, "a.json", &[-1.0, 1.0], &[1.0]);
    assert_eq!(code(&run(&["norm", "--input", a.to_str().unwrap(), "--params", "1,1,2"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn decompositions() {
    let dir = TempDir::new().unwrap();
    let c0 = spec(&dir, "c0.json", &[-1.0, -0.5, 0.5, 1.0], &[1.0, 0.0, 1.0]);
    let out = dir.path().join("d.json");
    let o = run(&["decompose", "--input", c0.to_str().unwrap(), "--params", "1,1,2,0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = read_json(&out);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert!((terms[0]["lambda"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert!(v["coefficient_cost"].is_number() && v["quasinorm_upper_bound"].is_number());
    assert!(v["residual_norm"].is_number());
    // the file reads back as the same decomposition
    let text = fs::read_to_string(&out).unwrap();
    let d = Decomposition::from_json(&text).unwrap();
    assert_eq!(Decomposition::from_json(&d.to_json()).unwrap(), d);

    let b2 = spec(&dir, "b2.json", &[-4.0, 4.0], &[1.0]);
    let v = json_out(&run(&["decompose", "--input", b2.to_str().unwrap(), "--params", "1,1,2,0", "--space", "restricted"]));
    let ks: Vec<i64> = v["terms"].as_array().unwrap().iter().map(|t| t["k"].as_i64().unwrap()).collect();
    assert_eq!(ks, vec![0, 1, 2]);
    assert_eq!(v["homogeneous"], false);

    let z = spec(&dir, "z.json", &[], &[]);
    let v = json_out(&run(&["decompose", "--input", z.to_str().unwrap(), "--params", "1,1,2,0"]));
    assert!(v["terms"].as_array().unwrap().is_empty());
    assert_eq!(v["coefficient_cost"], 0.0);
}

#[test]
fn hypothesis_violations_exit_3() {
    let dir = TempDir::new().unwrap();
    let b2 = spec(&dir, "b2.json", &[-4.0, 4.0], &[1.0]);
    let o = run(&["decompose", "--input", b2.to_str().unwrap(), "--params", "1,1,2,0"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("B_0"));
    let o = run(&["decompose", "--input", b2.to_str().unwrap(), "--params", "1,2,2,0", "--space", "homogeneous"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("p < s"));
}

#[test]
fn operators() {
    let dir = TempDir::new().unwrap();
    let b = spec(&dir, "b.json", &[1.0, 2.0], &[1.0]);
    let v = json_out(&run(&["apply", "--input", b.to_str().unwrap(), "--op", "hilbert", "--grid", "4"]));
    let h = v["values"][0].as_f64().unwrap();
    assert!((h - 1.5f64.ln() / PI).abs() < 1e-15);

    let v = json_out(&run(&["apply", "--input", b.to_str().unwrap(), "--op", "carleson", "--grid", "1.5"]));
    let c = v["values"][0].as_f64().unwrap();
    // (2 / pi) Si(pi)
    assert!((c - 2.0 / PI * 1.851_937_051_982_466_2).abs() < 1e-6);
    assert!((c - 1.17898).abs() < 1e-5);

    let o = run(&["apply", "--input", b.to_str().unwrap(), "--op", "hilbert", "--grid", "0,2"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("x = 2"));

    let z = spec(&dir, "z.json", &[], &[]);
    let out = dir.path().join("sn.json");
    let o = run(&["apply", "--input", z.to_str().unwrap(), "--op", "sn", "--grid", "lin:-1:1:5", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&fs::read_to_string(dir.path().join("sn.csv")).unwrap());
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|&(_, y)| y == 0.0));
    assert_eq!(read_json(&out)["operator"], "sn");

    assert_eq!(code(&run(&["apply", "--input", b.to_str().unwrap(), "--op", "fourier"])), 2);
}

#[test]
fn maximal_sharpness_harness_reports_its_failure() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "4.1", "--out", out.to_str().unwrap()]);
    // interior increments shrink by sqrt 2, not 2
    assert_eq!(code(&o), 5);
    let v = read_json(&out);
    assert_eq!(v["theorem"], "4.1");
    let slope = v["measurements"]["p1/boundary/slope"].as_f64().unwrap();
    assert!((slope - 4.0).abs() < 0.4);
    let verdicts = v["verdicts"].as_array().unwrap();
    let failed: Vec<&str> = verdicts.iter().filter(|x| x["pass"] == false).map(|x| x["criterion"].as_str().unwrap()).collect();
    assert_eq!(failed, vec!["p1 interior tail increments shrink at least 2x per doubling"]);
    assert_eq!(v["provenance"]["cli"]["version"], env!("CARGO_PKG_VERSION"));
    let tail = fs::read_to_string(dir.path().join("r.p1_boundary_tail.csv")).unwrap();
    assert_eq!(csv_rows(&tail).len(), 9);
}

#[test]
fn decomposition_independence_on_a_single_block() {
    let dir = TempDir::new().unwrap();
    // canonical block on C_0 for p = 1, s = 2, alpha = -1/2
    let c = 2f64.powf(-0.5) / 1.0;
    let f = spec(&dir, "a.json", &[-1.0, -0.5, 0.5, 1.0], &[c, 0.0, c]);
    let args = ["verify", "5.3", "--input", f.to_str().unwrap(), "--params", "1,1,2,-0.5", "--tolerance", "1e-10"];
    let first = run(&args);
    let v = json_out(&first);
    assert!(v["measurements"]["hilbert/rel_diff/max"].as_f64().unwrap() < 1e-10);
    // bit-identical on a rerun
    assert_eq!(run(&args).stdout, first.stdout);
}

#[test]
fn out_of_hypothesis_gate() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.json");
    let base = ["verify", "6.3", "--params", "1,1,2,1", "--schedule", "1,2,4,8", "--out", out.to_str().unwrap()];
    assert_eq!(code(&run(&base)), 3);
    let v = read_json(&out);
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["out_of_hypothesis"] == true && x["pass"].is_null()));
    let mut allowed = base.to_vec();
    allowed.push("--allow-out-of-hypothesis");
    assert_eq!(code(&run(&allowed)), 0);
    assert_eq!(code(&run(&["verify", "9.9"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
}

#[test]
fn sweeps() {
    let dir = TempDir::new().unwrap();
    let o = run(&["sweep", "--schedule", ""]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout), "N,error\n");

    let out = dir.path().join("e.csv");
    assert_eq!(code(&run(&["sweep", "--curve", "e", "--out", out.to_str().unwrap()])), 0);
    let e = csv_rows(&fs::read_to_string(&out).unwrap());
    assert_eq!(e.len(), 11);
    assert!(e.iter().all(|&(_, y)| y > 0.0));
    assert!(e[5..].windows(2).all(|w| w[1].1 < w[0].1));
    let side = read_json(&dir.path().join("e.json"));
    assert_eq!(side["rows"], 11);
    assert_eq!(side["provenance"]["tool"], "rlspace");

    let o = run(&["sweep", "--curve", "block-scale", "--op", "hilbert", "--k-range", "-4,4"]);
    assert_eq!(code(&o), 0);
    let rows = csv_rows(&String::from_utf8_lossy(&o.stdout));
    assert_eq!(rows.len(), 9);
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &(_, y)| (l.min(y), h.max(y)));
    assert!(hi / lo < 1.0 + 1e-9);
}
