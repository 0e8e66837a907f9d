use std::path::{Path, PathBuf};
use std::process::Command as Process;

use qtangent_cli::{run, CliError, Command, Options, Scenario, Status, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn verify(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_verify")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn write_scenario(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn strip_millis(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("millis");
    }
    v
}

#[test]
fn sample_scenarios_load() {
    let mut n = 0;
    for entry in std::fs::read_dir(scenarios()).unwrap() {
        let path = entry.unwrap().path();
        Scenario::load(&path, 0).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 8);
}

#[test]
fn hopf_check_to_degree_four() {
    let s = Scenario::parse(r#"{"kappa": "1", "d": 3, "algebra": {"matrix": 1}}"#, 0).unwrap();
    let r = run(Command::HopfCheck, &s, &Options { seed: 0, max_degree: Some(4) }).unwrap();
    assert!(r.passed);
    assert_eq!(r.failures(), 0);
    assert!(!r.checks.is_empty());
}

#[test]
fn partition_check_on_m4() {
    let s = Scenario::load(&scenarios().join("matrix-m4.json"), 0).unwrap();
    let r = run(Command::PartitionCheck, &s, &Options { seed: 0, max_degree: None }).unwrap();
    assert!(r.passed, "{:?}", r.checks);
}

#[test]
fn zero_connection_has_no_curvature() {
    let s = Scenario::load(&scenarios().join("curvature-zero.json"), 0).unwrap();
    let r = run(Command::Curvature, &s, &Options { seed: 0, max_degree: None }).unwrap();
    assert!(r.passed);
    assert_eq!(r.curvature.as_deref().map(<[_]>::len), Some(0));
}

#[test]
fn imaginary_connection_is_curved() {
    let s = Scenario::load(&scenarios().join("curvature-imaginary.json"), 0).unwrap();
    let r = run(Command::Curvature, &s, &Options { seed: 0, max_degree: None }).unwrap();
    assert!(r.passed);
    assert!(!r.curvature.unwrap().is_empty());
}

#[test]
fn nonpositive_kappa_rejected() {
    for k in ["0", "-1"] {
        let text = format!(r#"{{"kappa": "{k}", "d": 1, "algebra": {{"matrix": 2}}}}"#);
        let e = Scenario::parse(&text, 0).unwrap_err();
        assert!(matches!(e, CliError::Invalid { ref field, .. } if field == "kappa"), "{e}");
    }
}

#[test]
fn oversized_canonical_action_rejected() {
    let text = r#"{"kappa": "1", "d": 2, "algebra": {"matrix": 2}, "actions": [{"canonical": 3}]}"#;
    let e = Scenario::parse(text, 0).unwrap_err();
    assert!(matches!(e, CliError::Invalid { ref field, .. } if field == "actions[0]"), "{e}");
    let text = r#"{"kappa": "1", "d": 2, "algebra": {"matrix": 2}, "actions": [{"canonical": 2}]}"#;
    assert!(Scenario::parse(text, 0).is_err());
}

#[test]
fn parse_errors_carry_position_and_field() {
    let e = Scenario::parse(r#"{"kappa": "1", "d": 1, "algebra": {"matrx": 2}}"#, 0).unwrap_err();
    match e {
        CliError::Parse { path, line, message, .. } => {
            assert_eq!(path, "algebra");
            assert_eq!(line, 1);
            assert!(!message.contains("at line"), "{message}");
        }
        other => panic!("{other}"),
    }
}

#[test]
fn missing_sections_are_reported() {
    let s = Scenario::parse(r#"{"kappa": "1", "d": 1, "algebra": {"matrix": 2}}"#, 0).unwrap();
    let opts = Options { seed: 0, max_degree: None };
    for (cmd, section) in [
        (Command::CoveringCheck, "covering"),
        (Command::PartitionCheck, "partition"),
        (Command::Curvature, "actions"),
    ] {
        match run(cmd, &s, &opts) {
            Err(CliError::MissingSection(name)) => assert_eq!(name, section),
            other => panic!("{cmd}: {other:?}"),
        }
    }
}

#[test]
fn exit_codes() {
    let dir = scenarios();
    let (code, _, _) = verify(&["all", "--scenario", dir.join("block-model.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let (code, _, err) = verify(&["adapted-check", "--scenario", dir.join("four-points.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert!(err.contains("FAIL"));
    let (code, _, _) = verify(&["nonsense", "--scenario", dir.join("block-model.json").to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, err) = verify(&["all", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("error"));

    let tmp = tempfile::tempdir().unwrap();
    let bad = write_scenario(&tmp, "bad.json", r#"{"kappa": "0", "d": 1, "algebra": {"matrix": 2}}"#);
    let (code, _, err) = verify(&["all", "--scenario", &bad]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("kappa"));
}

#[test]
fn report_schema_and_determinism() {
    let path = scenarios().join("m3-canonical.json");
    let path = path.to_str().unwrap();
    let (code, out, _) = verify(&["all", "--scenario", path, "--seed", "11"]);
    assert_eq!(code, EXIT_PASS);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["id"].is_string());
        assert!(c["status"] == "pass" || c["status"] == "fail");
        assert!(c["millis"].is_u64());
    }
    let ids: Vec<&str> = checks.iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);

    let tmp = tempfile::tempdir().unwrap();
    let target = tmp.path().join("report.json");
    let (code, stdout, _) = verify(&["all", "--scenario", path, "--seed", "11", "--out", target.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert!(stdout.is_empty());
    let again: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(strip_millis(v), strip_millis(again));
}

#[test]
fn failing_checks_carry_witnesses() {
    let s = Scenario::load(&scenarios().join("four-points.json"), 0).unwrap();
    let r = run(Command::AdaptedCheck, &s, &Options { seed: 0, max_degree: None }).unwrap();
    assert!(!r.passed);
    for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
        assert!(c.witness.is_some(), "{}", c.id);
    }
}
