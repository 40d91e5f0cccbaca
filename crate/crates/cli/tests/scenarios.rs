use std::fs;
use std::process::Command;

use noether_cli::report::Relation;
use noether_cli::runner::{check_scenario, run_scenario, RunOptions};
use noether_cli::scenario::{Scenario, BUILTINS};

const TWO_D: &str = r#"
name = "planar"
dimension = 2
hamiltonian = "(p1^2 + p2^2)/2"

[[symmetries]]
label = "rotation"
ut = 0
ui = ["-q2", "q1"]

[classical]
q = [1.0, 0.0]
p = [0.0, 1.0]
t0 = 0.0
t1 = 1.0
dt = 1e-2
"#;

fn err(text: &str) -> String {
    Scenario::parse(text).unwrap_err().to_string()
}

#[test]
fn wrong_ui_length_names_the_field() {
    let text = TWO_D.replace(r#"ui = ["-q2", "q1"]"#, r#"ui = ["-q2"]"#);
    let e = err(&text);
    assert!(e.contains("symmetries[0].ui"), "{e}");
}

#[test]
fn quantum_needs_one_dimension() {
    let text = format!(
        "{TWO_D}\n[quantum]\ngrid = {{ x_min = -1.0, x_max = 1.0, points = 10 }}\n\
         initial = {{ gaussian = {{ center = 0.0, width = 0.2, momentum = 0.0 }} }}\n\
         t0 = 0.0\nt1 = 0.1\ndt = 1e-2\n"
    );
    assert!(err(&text).contains("quantum requires dimension 1"));
}

#[test]
fn schema_and_expression_errors() {
    let e = err(&TWO_D.replace("dt = 1e-2", "dt = \"fast\""));
    assert!(e.contains("classical.dt"), "{e}");
    let e = err(&TWO_D.replace("name = \"planar\"", "name = \"planar\"\ncolour = 1"));
    assert!(e.contains("colour"), "{e}");
    let e = err(&TWO_D.replace("(p1^2 + p2^2)/2", "(p1^2 + p2^2/2"));
    assert!(e.starts_with("hamiltonian"), "{e}");
    let e = err(&TWO_D.replace("\"q1\"]", "\"q3\"]"));
    assert!(e.contains("symmetries[0]"), "{e}");
}

#[test]
fn round_trip_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("planar.scn");
    fs::write(&path, TWO_D).unwrap();
    let a = Scenario::load(path.to_str().unwrap()).unwrap();
    let b = Scenario::parse(&a.render().unwrap()).unwrap();
    assert_eq!(a, b);
    for (name, _) in BUILTINS {
        let s = Scenario::load(name).unwrap();
        assert_eq!(Scenario::parse(&s.render().unwrap()).unwrap(), s, "{name}");
    }
}

#[test]
fn friction_run() {
    let s = Scenario::load("friction").unwrap();
    let out = run_scenario(&s, &RunOptions::default());
    assert!(out.report.passed, "{:?}", out.report.failures);
    assert!(out.report.symbolic.iter().all(|e| e.is_symmetry));

    let classical = out.classical.unwrap();
    let t_gamma = classical.column("T_Gamma").unwrap();
    assert!(t_gamma.iter().all(|v| (v - t_gamma[0]).abs() <= 1e-8));

    let q = out.report.quantum.unwrap();
    let dq = q.mean_drift.iter().find(|n| n.label == "dq").unwrap();
    assert!(dq.check.value <= 1e-6);
    assert_eq!(dq.check.tol, 1e-6);
    assert!(q.hermiticity.iter().all(|n| n.check.pass));
}

#[test]
fn constant_force_is_a_consistent_negative() {
    let s = Scenario::load("constant-force").unwrap();
    let out = run_scenario(&s, &RunOptions::default());
    assert!(out.report.passed, "{:?}", out.report.failures);
    let sym = out
        .report
        .symbolic
        .iter()
        .find(|e| e.label == "dq")
        .unwrap();
    assert!(!sym.is_symmetry);
    let classical = &out.report.classical.as_ref().unwrap().drift[0];
    assert_eq!(classical.check.relation, Relation::Exceeds);
    // p(t) = p0 - t over t in [0, 2]
    assert!((classical.check.value - 2.0).abs() <= 1e-9);
    let quantum = &out.report.quantum.as_ref().unwrap().mean_drift[0];
    assert_eq!(quantum.label, "dq");
    assert!(quantum.check.value > 1e3 * quantum.check.tol);
}

#[test]
fn classical_only_scenario() {
    let s = Scenario::parse(TWO_D).unwrap();
    let out = run_scenario(&s, &RunOptions::default());
    assert!(out.report.passed, "{:?}", out.report.failures);
    assert!(out.report.classical.is_some());
    assert!(out.report.quantum.is_none() && out.quantum.is_none());
    let json: serde_json::Value = serde_json::from_str(&out.report.to_json()).unwrap();
    assert!(json["quantum"].is_null());
    assert_eq!(json["classical"]["drift"][0]["tol"], 1e-8);
}

#[test]
fn headers_follow_declarations() {
    let s = Scenario::load("friction").unwrap();
    let a = run_scenario(&s, &RunOptions::default());
    assert_eq!(
        a.classical.as_ref().unwrap().header,
        ["t", "q1", "p1", "T_Gamma", "T_dq"]
    );
    assert_eq!(
        a.quantum.as_ref().unwrap().header,
        ["t", "norm", "T_Gamma", "T_dq", "q", "boundary_mass"]
    );
    let s = Scenario::parse(TWO_D).unwrap();
    let b = run_scenario(&s, &RunOptions::default());
    assert_eq!(
        b.classical.unwrap().header,
        ["t", "q1", "q2", "p1", "p2", "T_rotation"]
    );
}

#[test]
fn tolerance_override_applies_everywhere() {
    let s = Scenario::load("friction").unwrap();
    let out = run_scenario(
        &s,
        &RunOptions {
            tol: Some(1e-12),
            ..RunOptions::default()
        },
    );
    assert!(!out.report.passed);
    assert_eq!(out.report.metadata.drift_tol_override, Some(1e-12));
    let q = out.report.quantum.unwrap();
    assert!(q.mean_drift.iter().all(|n| n.check.tol == 1e-12));
    assert!(out.report.failures.iter().any(|f| f.contains("Gamma")));
}

#[test]
fn refinement_sweep() {
    let s = Scenario::load("free-particle").unwrap();
    let out = run_scenario(
        &s,
        &RunOptions {
            refine: 1,
            ..RunOptions::default()
        },
    );
    assert!(out.report.passed, "{:?}", out.report.failures);
    let rows = &out.report.quantum.unwrap().refinement;
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1].points, 2 * rows[0].points + 1);
    assert_eq!(rows[1].dt, rows[0].dt / 2.0);
}

#[test]
fn check_reports_verdicts() {
    let s = Scenario::load("constant-force").unwrap();
    let report = check_scenario(&s, &RunOptions::default());
    assert!(report.passed);
    assert!(report.classical.is_none());
    assert_eq!(report.symbolic.len(), 2);
}

fn noether(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_noether"))
        .args(args)
        .env_remove("NOETHER_TOL")
        .output()
        .unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("friction");
    let ok = noether(&["run", "friction", "--out", out.to_str().unwrap()]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    for name in ["report.json", "classical.csv", "quantum.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }

    let strict = Command::new(env!("CARGO_BIN_EXE_noether"))
        .args(["run", "friction", "--out", out.to_str().unwrap()])
        .env("NOETHER_TOL", "1e-12")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("FAIL quantum mean drift Gamma"));

    assert_eq!(
        noether(&["check", "no-such-scenario"]).status.code(),
        Some(2)
    );
    assert_eq!(noether(&["check", "friction"]).status.code(), Some(0));
    let spectrum = noether(&["spectrum", "box", "--count", "2"]);
    assert_eq!(spectrum.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&spectrum.stdout).starts_with("E1 = 4.93"));
    assert_eq!(noether(&["spectrum", "friction"]).status.code(), Some(2));
}
