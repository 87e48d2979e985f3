//! Scenario runner behind the `yamabe-lab` binary.

pub mod builtins;
pub mod config;
pub mod pipeline;

pub use config::ScenarioConfig;
pub use pipeline::{run, RunOutcome, RunReport, Stages};

use crate::error::{Error, Result};
use crate::levelset::write_scan_csv;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

/// Loads a scenario from a file path, or from the builtin catalog when no
/// such file exists.
pub fn resolve(arg: &str) -> Result<ScenarioConfig> {
    let path = Path::new(arg);
    if path.exists() {
        ScenarioConfig::load(path)
    } else {
        builtins::builtin(arg)
    }
}

/// Writes `report.json` and one CSV per scan into `dir`; returns the paths.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    let io =
        |p: &Path, e: std::io::Error| Error::Config(format!("cannot write {}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    let report = dir.join("report.json");
    let mut json = serde_json::to_string_pretty(&outcome.report)
        .map_err(|e| Error::Config(format!("cannot serialise report: {e}")))?;
    json.push('\n');
    std::fs::write(&report, json).map_err(|e| io(&report, e))?;
    written.push(report);
    for table in &outcome.tables {
        let path = dir.join(format!("{}.csv", table.stem));
        let file = File::create(&path).map_err(|e| io(&path, e))?;
        write_scan_csv(BufWriter::new(file), &table.scan, &table.bound)?;
        written.push(path);
    }
    Ok(written)
}
