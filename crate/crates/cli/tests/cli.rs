use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn sekine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sekine"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn emit_member(dir: &Path, k: usize, label: &str) -> PathBuf {
    let path = dir.join(format!("{}.json", label.replace(['[', ']', ';', ',', '{', '}'], "_")));
    let o = sekine(&["emit", "--k", &k.to_string(), "--label", label, "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn point_mass_d10() -> Value {
    json!({
        "k": 2,
        "alpha": [[[0, 0], [0, 0]], [[1, 0], [0, 0]]],
        "kappa": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    })
}

#[test]
fn enumerate_counts() {
    for (k, n) in [(2, 10), (3, 11)] {
        let o = sekine(&["enumerate", "--k", &k.to_string(), "--format", "json"]);
        assert_eq!(code(&o), 0);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["count"], n);
        assert_eq!(v["members"].as_array().unwrap().len(), n);
    }
    let table = sekine(&["enumerate", "--k", "2"]);
    assert_eq!(code(&table), 0);
    assert!(stdout(&table).starts_with("k=2: 10 idempotent states"));
}

#[test]
fn enumerate_rejects_small_k() {
    let o = sekine(&["enumerate", "--k", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_members_and_perturbations() {
    let dir = TempDir::new().unwrap();
    for label in ["h", "eps", "h_{2,0}", "h_{2,0,+-}"] {
        let path = emit_member(dir.path(), 2, label);
        let o = sekine(&["verify", "--state", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{label}");
        assert!(stdout(&o).contains(&format!("catalog member: {label}")));
    }

    let h = emit_member(dir.path(), 2, "h");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(h).unwrap()).unwrap();
    v["alpha"][0][0][0] = json!(0.125 + 0.01);
    v["alpha"][0][1][0] = json!(0.125 - 0.01);
    let perturbed = write_json(dir.path(), "perturbed.json", &v);
    let o = sekine(&["verify", "--state", perturbed.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["report"]["pass"], false);
    assert!(report["classification"].is_null());
}

#[test]
fn verify_parse_errors() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"k\": 2, \"alpha\": [").unwrap();
    assert_eq!(code(&sekine(&["verify", "--state", bad.to_str().unwrap()])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&sekine(&["verify", "--state", missing.to_str().unwrap()])), 2);

    let h = emit_member(dir.path(), 2, "h");
    let o = sekine(&["verify", "--state", h.to_str().unwrap(), "--k", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn lattice_dot_is_stable() {
    let a = sekine(&["lattice", "--k", "2"]);
    let b = sekine(&["lattice", "--k", "2"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("digraph idempotents {"));
    assert_eq!(text.lines().filter(|l| l.contains("[label=")).count(), 10);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 15);
}

#[test]
fn lattice_json() {
    let o = sekine(&["lattice", "--k", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 11);
}

#[test]
fn walk_from_haar_converges_immediately() {
    let dir = TempDir::new().unwrap();
    let h = emit_member(dir.path(), 2, "h");
    let o = sekine(&["walk", "--state", h.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["converged"], true);
    assert_eq!(v["report"]["steps_used"], 1);
    assert_eq!(v["limit_classification"], "h");
}

#[test]
fn walk_from_point_mass_oscillates() {
    let dir = TempDir::new().unwrap();
    let d10 = write_json(dir.path(), "d10.json", &point_mass_d10());
    let o = sekine(&["walk", "--state", d10.to_str().unwrap(), "--cesaro"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["converged"], false);
    assert_eq!(v["report"]["periodic"], true);
    assert_eq!(v["report"]["spectral"]["has_minus_one"], true);
    assert_eq!(v["cesaro"]["average_classification"], "h_G[1,0;0,0]");
    assert_eq!(v["cesaro"]["limit_classification"], "h_G[1,0;0,0]");
}

#[test]
fn walk_rejects_non_states() {
    let dir = TempDir::new().unwrap();
    let mut v = point_mass_d10();
    v["alpha"][1][0][0] = json!(-1.0);
    let neg = write_json(dir.path(), "neg.json", &v);
    assert_eq!(code(&sekine(&["walk", "--state", neg.to_str().unwrap()])), 1);
}

#[test]
fn selfcheck_passes_and_catches_flip() {
    for k in ["2", "4"] {
        let o = sekine(&["selfcheck", "--k", k]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert!(!stdout(&o).contains("[FAIL]"));
    }
    let o = sekine(&["selfcheck", "--k", "3", "--inject-eta-flip"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("closed-form convolution matches definition"));
}

#[test]
fn fourier_of_counit_and_haar() {
    let dir = TempDir::new().unwrap();
    let eps = emit_member(dir.path(), 3, "eps");
    let o = sekine(&["fourier", "--state", eps.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 9);
    assert!(lines.iter().all(|l| l.ends_with("[[1, 0], [0, 1]]")));

    let h = emit_member(dir.path(), 3, "h");
    let o = sekine(&["fourier", "--state", h.to_str().unwrap(), "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for entry in v.as_array().unwrap() {
        let norm: f64 = entry["matrix"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|row| row.as_array().unwrap().iter())
            .flat_map(|z| z.as_array().unwrap().iter())
            .map(|x| x.as_f64().unwrap().abs())
            .sum();
        let trivial = entry["p"] == 0 && entry["q"] == 0;
        assert_eq!(norm > 1e-12, trivial, "{entry}");
    }
}

#[test]
fn emit_unknown_label() {
    assert_eq!(code(&sekine(&["emit", "--k", "2", "--label", "nope"])), 2);
}
