use std::path::Path;

use serde::{Deserialize, Serialize};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::error::{CliError, CliResult};

/// Record of one `ber` run, written next to its CSV files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    /// Hex SHA-256 of the effective config in canonical JSON form.
    pub config_hash: String,
    pub seed: u64,
    pub threads: usize,
    pub started_at: String,
    pub finished_at: String,
    /// Output files, relative to the manifest's directory.
    pub outputs: Vec<String>,
    pub config: serde_json::Value,
}

pub fn now_rfc3339() -> String {
    OffsetDateTime::now_utc()
        .format(&Rfc3339)
        .expect("UTC timestamps format")
}

impl RunManifest {
    pub const FILE_NAME: &'static str = "manifest.json";

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join(Self::FILE_NAME), text + "\n")
            .map_err(|e| CliError::io("writing manifest", e))
    }
}
