//! Report files: `<command>.json` (deterministic), `<command>.meta.json`
//! (timestamps and environment) and `<command>.csv` for ratio samples.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::commands::Outcome;
use crate::config::{ConfigError, ExperimentConfig};
use crate::Command;

/// The report body. Suite timings vary between runs, so they move to the
/// metadata file.
pub fn report_value(command: Command, cfg: &ExperimentConfig, outcome: &Outcome) -> (Value, Value) {
    let mut result = outcome.result.clone();
    let mut timings = Value::Null;
    if command == Command::Suite {
        if let Some(rows) = result.as_array_mut() {
            let mut t = Vec::new();
            for row in rows.iter_mut() {
                if let Some(obj) = row.as_object_mut() {
                    t.push(json!({ "id": obj.get("id"), "elapsed_s": obj.remove("elapsed_s") }));
                    if let Some(Value::Object(detail)) = obj.get_mut("detail") {
                        strip_seconds(detail);
                    }
                }
            }
            timings = Value::Array(t);
        }
    }
    let body = json!({
        "op": command.name(),
        "spec": outcome.spec,
        "norms": outcome.norms,
        "config": cfg,
        "result": result,
        "pass": outcome.pass,
        "seed": cfg.seed,
        "tolerance": cfg.tolerance,
    });
    (body, timings)
}

fn strip_seconds(v: &mut serde_json::Map<String, Value>) {
    v.remove("seconds");
    for child in v.values_mut() {
        match child {
            Value::Object(m) => strip_seconds(m),
            Value::Array(items) => items.iter_mut().for_each(|x| {
                if let Value::Object(m) = x {
                    strip_seconds(m)
                }
            }),
            _ => {}
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> ConfigError {
    ConfigError::Io { path: path.display().to_string(), source }
}

fn unix_seconds(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Writes all report files and returns the path of the main report.
pub fn write(
    command: Command,
    cfg: &ExperimentConfig,
    outcome: &Outcome,
    dir: &Path,
    started: SystemTime,
    threads: usize,
) -> Result<PathBuf, ConfigError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let (body, timings) = report_value(command, cfg, outcome);
    let main = dir.join(format!("{}.json", command.name()));
    let text = serde_json::to_string_pretty(&body)?;
    fs::write(&main, text + "\n").map_err(|e| io_err(&main, e))?;

    if let Some(records) = &outcome.records {
        let csv_path = dir.join(format!("{}.csv", command.name()));
        let mut w = csv::Writer::from_path(&csv_path).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for r in records {
            w.serialize(r).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        w.flush().map_err(|e| io_err(&csv_path, e))?;
    }

    let finished = SystemTime::now();
    let meta = json!({
        "op": command.name(),
        "started_unix": unix_seconds(started),
        "finished_unix": unix_seconds(finished),
        "elapsed_s": finished.duration_since(started).map(|d| d.as_secs_f64()).unwrap_or(0.0),
        "threads": threads,
        "version": env!("CARGO_PKG_VERSION"),
        "timings": timings,
    });
    let meta_path = dir.join(format!("{}.meta.json", command.name()));
    fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n").map_err(|e| io_err(&meta_path, e))?;
    Ok(main)
}
