use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nazeta"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_lemma_is_clean_and_deterministic() {
    let a = run(&["verify-lemma", "--r", "4", "--trials", "1000", "--seed", "7"], "");
    assert_eq!(a.status.code(), Some(0));
    assert!(a.stdout.is_empty());
    let b = run(&["verify-lemma", "--r", "4", "--trials", "1000", "--seed", "7"], "");
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn hn_of_a_split_lattice() {
    let out = run(&["hn"], "2\n1/4 0\n0 4\n");
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["filtration"].as_array().unwrap().len(), 2);
    assert_eq!(v["filtration"][0], serde_json::json!([[1, 0]]));
    assert_eq!(v["semistable"], false);
    let p = v["polygon"].as_array().unwrap();
    assert!((p[1].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
    let out = run(&["hn"], "2\n1 0\n0 1\n");
    assert_eq!(json(&out)["semistable"], true);
}

#[test]
fn zeta2_scan_csv_changes_sign_at_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&["zeta2-scan", "--t0", "0", "--t1", "30", "--step", "0.01", "--csv", csv.to_str().unwrap()], "");
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&out);
    let zeros: Vec<f64> = summary["zeros"].as_array().unwrap().iter().map(|z| z.as_f64().unwrap()).collect();
    assert_eq!(summary["argument_count"].as_i64().unwrap(), zeros.len() as i64);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,Re,Im"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0], f[1])
        })
        .collect();
    assert_eq!(rows.len(), 3001);
    let changes: Vec<f64> = rows.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).map(|w| w[0].0).collect();
    assert_eq!(changes.len(), zeros.len());
    for (a, z) in changes.iter().zip(&zeros) {
        assert!(*a <= *z && *z <= a + 0.01 + 1e-12);
    }
}

#[test]
fn single_evaluations() {
    let out = run(&["zeta2", "--re", "0.3", "--im", "2"], "");
    let v = json(&out);
    assert_eq!(v["method"], "quadrature");
    let closed = json(&run(&["zeta2", "--re", "0.3", "--im", "2", "--method", "closed"], ""));
    for k in 0..2 {
        let (a, b) = (v["value"][k].as_f64().unwrap(), closed["value"][k].as_f64().unwrap());
        assert!((a - b).abs() < 1e-10);
    }
    let p = json(&run(&["period", "--s", "0.75+0.3i", "--T", "1.5"], ""));
    let pc = json(&run(&["period", "--s", "0.75+0.3i", "--T", "1.5", "--method", "closed"], ""));
    assert_eq!(p["s"], serde_json::json!([0.75, 0.3]));
    assert!(pc["est_error"].is_null());
    assert!((p["value"][0].as_f64().unwrap() - pc["value"][0].as_f64().unwrap()).abs() < 1e-10);
    assert_eq!(run(&["zeta2", "--re", "1"], "").status.code(), Some(1));
}

#[test]
fn bridge_reports_counterexamples() {
    let dir = tempfile::tempdir().unwrap();
    let zero3 = file(&dir, "zero3.poly", "0 0 0 0\n");
    let out = run(&["bridge", "--polygon", &zero3, "--parabolic", "1,1,1", "--h", "-5/3 4/3 1/3"], "");
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!((v["lhs"].as_bool(), v["rhs"].as_bool()), (Some(false), Some(true)));
    let out = run(&["bridge", "--trials", "500"], "0 1/2 0\n");
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["bridge"], "0 -1 1 0\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cone_forms_and_integrals() {
    let dir = tempfile::tempdir().unwrap();
    let poly = file(&dir, "p.poly", "0 2 0\n");
    let v = json(&run(&["cone-forms", "--polygon", &poly, "--parabolic", "1,1"], ""));
    assert_eq!(v["matrix"], serde_json::json!([["2"]]));
    assert_eq!(v["inverse"], serde_json::json!([["1/2"]]));
    assert_eq!(v["forms"][0]["root_coefficients"], serde_json::json!(["1/2"]));
    assert_eq!(v["forms"][0]["threshold"], "2");
    let v = json(&run(&["cone-int"], "dim: 2\nf: exp(-x1-2*x2)\ncone: 1 0\ncone: 0 1\n"));
    assert_eq!(v["exact"], "(1/2)");
    assert_eq!(v["value"], serde_json::json!([0.5, 0.0]));
    let v = json(&run(&["cone-int"], "dim: 1\nf: exp(x1)\ncone: 1\nlambda: -1\n"));
    assert_eq!(v["value"], serde_json::Value::Null);
    assert_eq!(v["singular_hyperplanes"].as_array().unwrap().len(), 1);
}

#[test]
fn fundamental_relation() {
    let dir = tempfile::tempdir().unwrap();
    let poly = file(&dir, "p.poly", "0 0 0\n");
    let v = json(&run(&["fundrel", "--polygon", &poly], "2\n1 0\n0 1\n"));
    assert_eq!((v["lhs"].as_bool(), v["rhs"].as_i64()), (Some(true), Some(1)));
    let v = json(&run(&["fundrel", "--polygon", &poly], "2\n1/4 0\n0 4\n"));
    assert_eq!((v["lhs"].as_bool(), v["rhs"].as_i64()), (Some(false), Some(0)));
    assert_eq!(run(&["fundrel", "--polygon", &poly], "2\n1 0\n0 2\n").status.code(), Some(1));
}

#[test]
fn roots_of_sl3() {
    let v = json(&run(&["roots", "--r", "3"], ""));
    assert_eq!(v["rho"], serde_json::json!(["1", "0", "-1"]));
    assert_eq!(v["parabolics"].as_array().unwrap().len(), 4);
    assert_eq!(v["fundamental_weights"][0], serde_json::json!(["2/3", "-1/3", "-1/3"]));
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(run(&["nonsense"], "").status.code(), Some(1));
    assert_eq!(run(&["hn", "--bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["hn"], "2\n1 0\n").status.code(), Some(1));
    assert_eq!(run(&["hn", "--format", "csv"], "2\n1 0\n0 1\n").status.code(), Some(1));
    assert_eq!(run(&["zeta2", "--re", "0.3", "--precision", "40"], "").status.code(), Some(1));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roots.json");
    let out = run(&["roots", "--r", "2", "--output", path.to_str().unwrap()], "");
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["rank"], 2);
}
