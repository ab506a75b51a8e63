use std::path::Path;
use std::process::{Command, Output};

use fracmax::continuous::StepFunction1D;
use fracmax::experiments::{SearchResult, VerificationReport};
use fracmax::lattice::LatticeFunction;
use fracmax::variation::VariationValue;

fn fracmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracmax"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn omega_count_and_gauge() {
    let dir = tempfile::tempdir().unwrap();
    let body = write(dir.path(), "lp2.json", r#"{"type":"lp","p":2,"dim":2}"#);
    let o = fracmax(&["omega", "count", "--omega", &body, "--r", "1", "--x0", "0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "5");
    let o = fracmax(&["omega", "count", "--omega", "linf", "--r", "2.5", "--x0", "0,0,0"]);
    assert_eq!(stdout(&o).trim(), "125");
    let o = fracmax(&["omega", "gauge", "--omega", "l1", "--y", "-1,2"]);
    assert_eq!(stdout(&o).trim(), "3.0");
    let o = fracmax(&["omega", "enumerate", "--omega", "l1", "--r", "1", "--x0", "0,0"]);
    let text = stdout(&o);
    assert!(text.starts_with("# fracmax "));
    assert_eq!(text.lines().nth(1), Some("m1,m2"));
    assert_eq!(text.lines().count(), 2 + 5);
}

#[test]
fn maxfun_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let f = LatticeFunction::from_slice_1d(0, &[1.0, 0.0, 2.0]).unwrap();
    let input = write(dir.path(), "f.json", &f.to_json());
    let out = dir.path().join("g.csv");
    let args = [
        "maxfun", "--input", &input, "--beta", "0.5", "--mode", "uncentered", "--window", "-50:50",
        "--out", out.to_str().unwrap(),
    ];
    assert_eq!(fracmax(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(fracmax(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let mut lines = first.lines();
    assert!(lines.next().unwrap().contains("seed=none"));
    assert_eq!(lines.next(), Some("n,value,r,s"));
    assert_eq!(lines.count(), 101);
    let o = fracmax(&["maxfun", "--input", &input, "--mode", "centered", "--omega", "l2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"mode\":\"centered\""));
}

#[test]
fn variation_of_functions() {
    let dir = tempfile::tempdir().unwrap();
    let d = LatticeFunction::point_mass(&[0], 1.0).unwrap();
    let input = write(dir.path(), "d.json", &d.to_json());
    let o = fracmax(&["variation", "--input", &input]);
    let v = VariationValue::from_json(&stdout(&o)).unwrap();
    assert_eq!(v.value, 2.0);
    let o = fracmax(&["variation", "--input", &input, "--beta", "0"]);
    let v = VariationValue::from_json(&stdout(&o)).unwrap();
    assert!((v.upper() - 2.0).abs() < 1e-12);
    let s = StepFunction1D::indicator(0.0, 1.0, 1.0).unwrap();
    let input = write(dir.path(), "s.json", &s.to_json());
    let o = fracmax(&["variation", "--input", &input, "--format", "csv"]);
    assert_eq!(stdout(&o).lines().nth(2), Some("2.0,1.0,0.0,2.0,false"));
    assert_eq!(fracmax(&["variation", "--input", &input, "--q", "2"]).status.code(), Some(2));
    let o = fracmax(&["variation", "--input", &input, "--beta", "0.5"]);
    let v = VariationValue::from_json(&stdout(&o)).unwrap();
    assert!(v.value > 0.0 && v.value <= 8f64.sqrt() * 2.0);
}

#[test]
fn verify_reports_and_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = fracmax(&[
        "verify", "thm2", "--trials", "50", "--support", "64", "--betas", "0,0.25,0.5,0.75", "--seed", "42",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = VerificationReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(r.pass && r.trials.len() == 200);
    for t in &r.trials {
        let q = t.params["q"];
        assert!(t.ratio <= 4f64.powf(1.0 / q) + 1e-9);
    }
    let o = fracmax(&["verify", "segments", "--trials", "20", "--seed", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# fracmax 0.1.0 seed=1 "));
    assert!(text.lines().nth(1).unwrap().starts_with("index,seed,descriptor,params,ratio,bound,pass"));
    let o = fracmax(&["verify", "thm3", "--beta", "0.5", "--alpha", "0", "--q", "1.2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("necessary condition"));
    let o = fracmax(&["verify", "thm3", "--trials", "6", "--beta", "0", "--alpha", "1", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fracmax(&["verify", "pointwise", "--beta", "0.5"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(fracmax(&["maxfun", "--bogus"]).status.code(), Some(2));
    assert_eq!(fracmax(&["nothing"]).status.code(), Some(2));
    assert_eq!(fracmax(&["--help"]).status.code(), Some(0));
    let o = fracmax(&["maxfun", "--input", "/nonexistent.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_fracmax"))
        .args(["omega", "gauge", "--omega", "linf", "--y", "1,1"])
        .env("FRACMAX_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_writes_a_replayable_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let args = [
        "search", "--mode", "thm2", "--beta", "0.5", "--size", "12", "--iterations", "100", "--seed", "7",
        "--witness", w.to_str().unwrap(),
    ];
    let a = fracmax(&args);
    let b = fracmax(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = SearchResult::from_json(&stdout(&a)).unwrap();
    let f = LatticeFunction::from_json(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(fracmax::experiments::thm2_ratio(&f, 0.5).unwrap(), r.best_ratio);
}

#[test]
fn convergence_table() {
    let dir = tempfile::tempdir().unwrap();
    let s = StepFunction1D::indicator(0.0, 1.0, 1.0).unwrap();
    let input = write(dir.path(), "s.json", &s.to_json());
    let o = fracmax(&["convergence", "--input", &input, "--beta", "0.5", "--queries", "-1,0.5,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    let o = fracmax(&["convergence", "--input", &input, "--beta", "0.5", "--queries", "0.05"]);
    assert_eq!(o.status.code(), Some(2));
}
