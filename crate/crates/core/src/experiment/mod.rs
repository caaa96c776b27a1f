//! Config-driven experiment runner.

pub mod config;
pub mod report;
pub mod suites;
pub mod table;

use std::path::Path;
use std::time::Instant;

pub use config::{Experiment, ExperimentConfig};
pub use report::{ExperimentReport, Runtime, Status, TableEntry, Verdict, SCHEMA_VERSION};
pub use suites::INVARIANTS;
pub use table::Table;

use crate::error::Result;
use crate::families::build_family;

pub struct RunOutput {
    pub report: ExperimentReport,
    pub tables: Vec<Table>,
}

/// Runs the configured suites. Family construction errors are returned;
/// computation errors inside a suite become failed (or skipped) verdicts.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let start = Instant::now();
    let built = build_family(&config.family, config.grid_size, config.param_len(), config.truncation)?;
    let ctx = suites::Context::new(config, &built);
    let mut tables = Vec::new();
    let mut verdicts = Vec::new();
    let mut observations = serde_json::Map::new();
    let mut entries = Vec::new();
    for suite in config.experiment.suites() {
        let out = ctx.run(suite);
        for t in &out.tables {
            entries.push(TableEntry { experiment: suite.name().into(), file: t.file.clone(), rows: t.len() });
        }
        tables.extend(out.tables);
        verdicts.extend(out.verdicts);
        observations.extend(out.observations);
    }
    let report = ExperimentReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        family: built.family.to_string(),
        tables: entries,
        verdicts,
        observations,
        runtime: Runtime { version: env!("CARGO_PKG_VERSION").into(), seconds: start.elapsed().as_secs_f64() },
    };
    Ok(RunOutput { report, tables })
}

/// Writes every table and `report.json` into `dir` (created if missing).
pub fn write_outputs(output: &RunOutput, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for t in &output.tables {
        std::fs::write(dir.join(&t.file), t.to_csv())?;
    }
    let json = serde_json::to_string_pretty(&output.report).map_err(std::io::Error::other)?;
    std::fs::write(dir.join("report.json"), json + "\n")
}
