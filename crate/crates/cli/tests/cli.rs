use std::path::Path;
use std::process::{Command, Output};

fn thh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thh")).args(args).output().expect("spawn thh")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn list_names_every_scenario() {
    let out = thh(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["thh-ku-over-l", "thh-ku-over-ko", "shukla", "higher-thh-iterate"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn csv_run_passes() {
    let out = thh(&["run", "thh-ku-over-l", "--prime", "3", "--max-degree", "20", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("degree,computed,expected,verdict"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let out = thh(&["run", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage:"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(thh(&["run", "shukla", "--prime", "4"]).status.code(), Some(2));
    assert_eq!(thh(&["run", "shukla", "--method", "magic"]).status.code(), Some(2));
    assert_eq!(thh(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_files_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "zero.json", r#"{"scenario": "shukla", "max_degree": 0}"#);
    assert_eq!(thh(&["run", "--config", &zero]).status.code(), Some(2));

    let unknown = write(dir.path(), "unknown.json", "{\"scenario\": \"shukla\",\n\"primez\": 3}");
    let out = thh(&["run", "--config", &unknown]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("primez"));

    let minimal = write(dir.path(), "minimal.json", r#"{"scenario": "shukla", "prime": 3, "max_degree": 8}"#);
    let out = thh(&["run", "--config", &minimal, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.json", r#"{"scenario": "shukla", "prime": 3, "max_degree": 8, "format": "csv"}"#);
    let out = thh(&["run", "--config", &config, "--prime", "5", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["parameters"]["prime"], 5);
}

#[test]
fn both_methods_report_an_oracle() {
    let out = thh(&["run", "thh-ku-over-l-coeff-z", "--prime", "3", "--max-degree", "20", "--method", "both", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["oracle"]["equal"], true);
    assert!(v["oracle"]["cells_compared"].as_u64().unwrap() > 0);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for (path, jobs) in [(&a, "1"), (&b, "4")] {
            let out = thh(&[
                "run", "regular-quotient-general", "--max-degree", "16", "--instances", "3", "--seed", "7",
                "--format", format, "--out", path.to_str().unwrap(), "--jobs", jobs,
            ]);
            assert!(out.status.success());
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{format} differs");
    }
}

#[test]
fn compute_runs_a_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "p.json",
        r#"{"name": "truncated", "coefficients": {"ring": "PrimeField", "p": 3},
            "algebra": {"family": "truncated", "degree": 2, "height": 3}, "max_degree": 20}"#,
    );
    let out = thh(&["compute", &spec, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().contains("degree,computed,expected,verdict"));

    let bad = write(dir.path(), "bad.json", r#"{"algebra": {"family": "exterior", "degree": 3}}"#);
    assert_eq!(thh(&["compute", &bad]).status.code(), Some(2));
}
