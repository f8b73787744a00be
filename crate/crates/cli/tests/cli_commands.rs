use std::path::{Path, PathBuf};

use gradenorm_cli::{run, EXIT_CONFIG, EXIT_PASS, EXIT_VIOLATION};
use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn invoke(command: &str, cfg: Option<&str>, out: &Path, extra: &[&str]) -> i32 {
    let mut args = vec!["gradenorm".to_string(), command.to_string()];
    if let Some(name) = cfg {
        args.push("--config".into());
        args.push(config(name).display().to_string());
    }
    args.push("--out".into());
    args.push(out.display().to_string());
    args.extend(extra.iter().map(|s| s.to_string()));
    run(args)
}

fn report(out: &Path, op: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{op}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn example_configs_exit_as_documented() {
    let cases = [
        ("witness", "witness_grassmann.json", EXIT_PASS),
        ("witness", "witness_clifford.json", EXIT_PASS),
        ("audit-weights", "audit_factorial_shift.json", EXIT_PASS),
        ("audit-weights", "audit_mixed.json", EXIT_PASS),
        ("sample-ratios", "sample_factorial.json", EXIT_PASS),
        ("sample-ratios", "sample_twisted.json", EXIT_PASS),
        ("best-constant", "best_grassmann.json", EXIT_PASS),
        ("gamma-check", "gamma_check.json", EXIT_PASS),
        ("violation-search", "violation_grassmann.json", EXIT_VIOLATION),
        ("violation-search", "violation_symmetric.json", EXIT_VIOLATION),
        ("violation-search", "violation_normalized.json", EXIT_PASS),
    ];
    for (command, file, expected) in cases {
        let dir = tempfile::tempdir().unwrap();
        let code = invoke(command, Some(file), dir.path(), &[]);
        assert_eq!(code, expected, "{command} {file}");
        let body = report(dir.path(), command);
        assert_eq!(body["op"], command);
        assert_eq!(body["pass"], Value::Bool(expected == EXIT_PASS), "{file}");
        assert!(dir.path().join(format!("{command}.meta.json")).exists());
    }
}

#[test]
fn witness_report_carries_the_sqrt_four_thirds_ratio() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(invoke("witness", Some("witness_grassmann.json"), dir.path(), &[]), EXIT_PASS);
    let body = report(dir.path(), "witness");
    let text = body["result"].to_string();
    assert!(text.contains("1.1547005383"), "{text}");
}

#[test]
fn flat_weights_exceed_sqrt_three_and_csv_logs_every_trial() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(invoke("sample-ratios", Some("sample_flat.json"), dir.path(), &[]), EXIT_VIOLATION);
    let mut reader = csv::Reader::from_path(dir.path().join("sample-ratios.csv")).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header, ["trial", "degree_a", "degree_b", "ratio"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let body = report(dir.path(), "sample-ratios");
    assert_eq!(rows.len() as u64, body["config"]["samples"].as_u64().unwrap());
    let above = rows.iter().filter(|row| row[3].parse::<f64>().unwrap() > 3f64.sqrt() + 1e-9).count();
    assert!(above > 0);
    assert_eq!(above as u64, body["result"]["exceedances"].as_u64().unwrap());
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    invoke("sample-ratios", Some("sample_factorial.json"), a.path(), &["--threads", "1"]);
    invoke("sample-ratios", Some("sample_factorial.json"), b.path(), &["--threads", "3"]);
    let ja = std::fs::read(a.path().join("sample-ratios.json")).unwrap();
    let jb = std::fs::read(b.path().join("sample-ratios.json")).unwrap();
    assert_eq!(ja, jb);
}

#[test]
fn overrides_beat_file_and_file_beats_defaults() {
    let dir = tempfile::tempdir().unwrap();
    invoke("sample-ratios", Some("sample_factorial.json"), dir.path(), &["--samples=200", "--algebra.generators=4", "--algebra.truncation=4"]);
    let body = report(dir.path(), "sample-ratios");
    assert_eq!(body["config"]["samples"], 200);
    assert_eq!(body["config"]["seed"], 1);
    assert_eq!(body["config"]["grid"], 50);
    assert_eq!(body["config"]["algebra"]["generators"], 4);

    let dir = tempfile::tempdir().unwrap();
    invoke("sample-ratios", Some("sample_factorial.json"), dir.path(), &["--seed", "9", "--samples=100"]);
    assert_eq!(report(dir.path(), "sample-ratios")["seed"], 9);
}

#[test]
fn bad_input_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(invoke("witness", Some("witness_grassmann.json"), dir.path(), &["--bogus=1"]), EXIT_CONFIG);
    assert_eq!(invoke("witness", Some("missing.json"), dir.path(), &[]), EXIT_CONFIG);
    assert_eq!(invoke("witness", None, dir.path(), &[]), EXIT_CONFIG);
    assert_eq!(
        invoke("sample-ratios", Some("sample_factorial.json"), dir.path(), &["--algebra.kind=octonion"]),
        EXIT_CONFIG
    );
    assert_eq!(invoke("witness", Some("witness_grassmann.json"), dir.path(), &["--threads", "0"]), EXIT_CONFIG);
}

#[test]
fn audit_runs_from_overrides_alone() {
    let dir = tempfile::tempdir().unwrap();
    let code = invoke("audit-weights", None, dir.path(), &["--norm.w_family=factorial_inv_shift", "--grid=20"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(report(dir.path(), "audit-weights")["config"]["grid"], 20);
}
