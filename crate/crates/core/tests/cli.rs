//! End-to-end runs of the binary on the corpus and on temporary files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uniqcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Recomputes every recorded system from the raw report, without the library's types.
fn audit_raw(report: &Value) -> usize {
    let mut checked = 0;
    for cert in report["certificates"].as_array().unwrap() {
        for cond in cert["conditions"].as_array().unwrap() {
            if cond["status"] != "Holds" {
                continue;
            }
            let Some(sys) = cond.get("system") else { continue };
            let mut r: Vec<f64> = sys["zhat"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
            for block in sys["blocks"].as_array().unwrap() {
                let values: Vec<f64> = block["values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
                for (col, v) in block["columns"].as_array().unwrap().iter().zip(&values) {
                    for (ri, c) in r.iter_mut().zip(col.as_array().unwrap()) {
                        *ri += c.as_f64().unwrap() * v;
                    }
                }
                match block["sign"].as_str().unwrap() {
                    "nonnegative" => assert!(values.iter().all(|v| *v >= -1e-10), "{}", cond["name"]),
                    "positive" => assert!(values.iter().all(|v| *v > 0.0), "{}", cond["name"]),
                    _ => {}
                }
            }
            let res = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(res <= 1e-8, "{}: residual {res}", cond["name"]);
            checked += 1;
        }
    }
    checked
}

#[test]
fn corpus_verdicts() {
    let cases = [
        ("bp_unique.json", 0),
        ("bp_nonunique.json", 1),
        ("dantzig_unique.json", 0),
        ("dantzig_nonunique.json", 1),
        ("ellipse.json", 1),
        ("l1_ball.json", 1),
        ("l1_ball_origin.json", 1),
    ];
    for (file, code) in cases {
        let path = corpus(file);
        let path = path.to_str().unwrap();
        assert_eq!(run(&["certify", path]).status.code(), Some(code), "certify {file}");
        assert_eq!(run(&["oracle", path]).status.code(), Some(code), "oracle {file}");
    }
}

#[test]
fn l1_ball_oracle_reports_a_second_point() {
    let o = run(&["oracle", corpus("l1_ball.json").to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let p = v["oracle"]["second_point"].as_array().expect("second point");
    assert_eq!(p.len(), 2);
}

#[test]
fn certify_reports_are_auditable_from_raw_json() {
    let o = run(&["certify", corpus("bp_unique.json").to_str().unwrap(), "--json", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(audit_raw(&json(&o)) > 0);

    let dir = tempfile::tempdir().unwrap();
    for family in ["lasso", "bpdn1", "bpdn2"] {
        let gen = run(&["gen", &format!("family={family}"), "seed=5"]);
        assert_eq!(gen.status.code(), Some(0));
        let path = write_temp(&dir, &format!("{family}.json"), &stdout(&gen));
        let o = run(&["certify", &path, "--json"]);
        let report = json(&o);
        audit_raw(&report);
        assert_eq!(report["kind"], "certify");
    }
}

#[test]
fn malformed_inputs_exit_with_input_code() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write_temp(&dir, "ragged.json", r#"{"family":"bp","A":[[1,2],[3]],"y":[1,1],"x_star":[0,0],"g":{"kind":"l1"}}"#);
    let o = run(&["certify", &ragged]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!o.stderr.is_empty());

    let infeasible = write_temp(&dir, "infeasible.json", r#"{"family":"bp","A":[[1,1]],"y":[1],"x_star":[5,5],"g":{"kind":"l1"}}"#);
    assert_eq!(run(&["oracle", &infeasible]).status.code(), Some(4));
    assert_eq!(run(&["certify", &infeasible]).status.code(), Some(4));

    let unknown = write_temp(&dir, "unknown.json", r#"{"family":"bp","A":[[1]],"y":[1],"x_star":[1],"g":{"kind":"l1"},"bogus":0}"#);
    let o = run(&["certify", &unknown]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    assert_eq!(run(&["certify", "/nonexistent/instance.json"]).status.code(), Some(4));
}

#[test]
fn compare_on_generated_bp_instances_agrees() {
    let o = run(&["compare", "--gen", "family=bp", "--count", "100", "--seed", "1"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("100 total"), "{text}");
    let line = text.lines().find(|l| l.starts_with("agreement:")).unwrap();
    let frac = line.trim_start_matches("agreement: ").split_whitespace().next().unwrap();
    let (agreed, decided) = frac.split_once('/').unwrap();
    assert_eq!(agreed, decided);

    let o = run(&["compare", "--gen", "family=bp", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn generation_is_byte_stable() {
    let a = run(&["gen", "family=lasso", "seed=3"]);
    let b = run(&["gen", "family=lasso", "seed=3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lasso.json");
    let o = run(&["gen", "family=lasso", "seed=3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);

    let report = json(&run(&["certify", path.to_str().unwrap(), "--json"]));
    let cond = report["certificates"][0]["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "lasso.optimality")
        .expect("optimality condition");
    assert_eq!(cond["status"], "Holds");
}

#[test]
fn boundary_generation_is_exact() {
    let o = run(&["gen", "family=bpdn1", "branch=boundary", "seed=8"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = v["A"].as_array().unwrap();
    let y = v["y"].as_array().unwrap();
    let x: Vec<f64> = v["x_star"].as_array().unwrap().iter().map(|t| t.as_f64().unwrap()).collect();
    let f: f64 = a
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let ax: f64 = row.as_array().unwrap().iter().zip(&x).map(|(p, q)| p.as_f64().unwrap() * q).sum();
            (ax - yi.as_f64().unwrap()).powi(2)
        })
        .sum::<f64>();
    let eps = v["epsilon"].as_f64().unwrap();
    assert!((f - eps).abs() <= 1e-12 * eps.max(1.0), "f={f} eps={eps}");
}

#[test]
fn tolerance_precedence_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "tols.json",
        r#"{"family":"bp","A":[[2,1]],"y":[2],"x_star":[1,0],"g":{"kind":"l1"},"tolerances":{"tol_rank":1e-7}}"#,
    );
    let v = json(&run(&["certify", &path, "--json", "--tol-rank", "1e-5", "--tol-strict", "1e-6"]));
    assert_eq!(v["tolerances"]["tol_rank"].as_f64(), Some(1e-7));
    assert_eq!(v["tolerances"]["tol_strict"].as_f64(), Some(1e-6));
}
