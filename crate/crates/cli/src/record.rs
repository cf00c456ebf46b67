//! The persisted record of one run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub config: ExperimentConfig,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    pub payload: serde_json::Value,
    pub fits: serde_json::Value,
    /// Hex SHA-256 of the canonical payload serialization.
    pub payload_sha256: String,
}

/// Keys are sorted (`serde_json` maps are ordered) and floats print in
/// shortest round-trip form, so equal payloads hash equally.
pub fn payload_hash(payload: &serde_json::Value) -> String {
    let bytes = serde_json::to_vec(payload).expect("json values always serialize");
    hex::encode(Sha256::digest(&bytes))
}

impl ExperimentRecord {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf, CliError> {
        let path = dir.join(format!("{stem}.record.json"));
        let text = serde_json::to_string_pretty(self).expect("records always serialize");
        write_file(&path, &text)?;
        Ok(path)
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
