use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::experiment::{ResultRow, ResultsTable};
use crate::error::{BaxError, Result};

pub const RESULTS_FILE: &str = "results.csv";

fn csv_err(path: &Path, e: csv::Error) -> BaxError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => BaxError::io(path, io),
        other => BaxError::Parse {
            line: 0,
            message: format!("{}: {other:?}", path.display()),
        },
    }
}

/// Writes `results.csv`, one JSON run record per run under `runs/`, and
/// `failures.csv` when any run aborted. Returns the paths written.
pub fn write_results(
    table: &ResultsTable,
    config: Option<&ExperimentConfig>,
    out_dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| BaxError::io(out_dir, e))?;
    let mut written = Vec::new();

    let results = out_dir.join(RESULTS_FILE);
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(&results)
        .map_err(|e| csv_err(&results, e))?;
    w.write_record(["method", "trial", "iteration", "metric", "value"])
        .map_err(|e| csv_err(&results, e))?;
    for r in &table.rows {
        w.serialize(r).map_err(|e| csv_err(&results, e))?;
    }
    w.flush().map_err(|e| BaxError::io(&results, e))?;
    written.push(results);

    if let Some(cfg) = config {
        let p = out_dir.join("config.resolved.toml");
        fs::write(&p, cfg.to_toml()?).map_err(|e| BaxError::io(&p, e))?;
        written.push(p);
    }

    if !table.runs.is_empty() {
        let runs = out_dir.join("runs");
        fs::create_dir_all(&runs).map_err(|e| BaxError::io(&runs, e))?;
        for run in &table.runs {
            let p = runs.join(format!("{}-trial{}.json", run.method, run.trial));
            let doc = serde_json::json!({
                "method": run.method,
                "trial": run.trial,
                "seed": run.seed,
                "experiment": config,
                "record": run.record,
            });
            let text =
                serde_json::to_string_pretty(&doc).map_err(|e| BaxError::config(e.to_string()))?;
            fs::write(&p, text).map_err(|e| BaxError::io(&p, e))?;
            written.push(p);
        }
    }

    if !table.failures.is_empty() {
        let p = out_dir.join("failures.csv");
        let mut w = csv::Writer::from_path(&p).map_err(|e| csv_err(&p, e))?;
        for f in &table.failures {
            w.serialize(f).map_err(|e| csv_err(&p, e))?;
        }
        w.flush().map_err(|e| BaxError::io(&p, e))?;
        written.push(p);
    }
    Ok(written)
}

/// Reads a results CSV back into rows.
pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let mut rows = Vec::new();
    for (i, row) in r.deserialize().enumerate() {
        rows.push(row.map_err(|e: csv::Error| BaxError::Parse {
            line: i + 2,
            message: e.to_string(),
        })?);
    }
    Ok(rows)
}
