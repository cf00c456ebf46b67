//! Configuration, execution and persistence of ssflab experiments.

pub mod config;
pub mod describe;
pub mod error;
pub mod record;
pub mod runner;
pub mod tables;

use std::path::Path;
use std::time::Instant;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::CliError;
pub use record::{payload_hash, ExperimentRecord};

/// Run `cfg`, write the record and tables under `out_dir`, and return the record.
pub fn execute(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentRecord, CliError> {
    let start = Instant::now();
    let outcome = runner::run_experiment(cfg)?;
    let record = ExperimentRecord {
        config: cfg.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        payload_sha256: payload_hash(&outcome.payload),
        payload: outcome.payload,
        fits: outcome.fits,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io {
        path: out_dir.display().to_string(),
        message: e.to_string(),
    })?;
    let stem = cfg.stem();
    record.write(out_dir, &stem)?;
    if cfg.output.tables {
        for t in &outcome.tables {
            record::write_file(&out_dir.join(format!("{stem}.{}.csv", t.name)), &t.to_csv())?;
        }
    }
    Ok(record)
}
