//! `beamspace complexity`: multiplication counts and speed-up over a grid of block lengths.

use std::path::{Path, PathBuf};

use beamspace::complexity::{ComplexityReport, ComplexityRow};
use serde::Serialize;

use super::ensure_dir;
use crate::error::{CliError, CliResult};

#[derive(Serialize)]
struct Row<'a> {
    algorithm: &'a str,
    #[serde(rename = "T")]
    t: u64,
    preprocessing: String,
    precoding: String,
    total: String,
    speedup: f64,
}

impl<'a> From<&'a ComplexityRow> for Row<'a> {
    fn from(r: &'a ComplexityRow) -> Self {
        // counts exceed u64 for large T, so they go out as decimal strings
        Row {
            algorithm: r.algorithm.name(),
            t: r.t,
            preprocessing: r.preprocessing.to_string(),
            precoding: r.precoding.to_string(),
            total: r.total.to_string(),
            speedup: r.speedup,
        }
    }
}

pub fn file_name(b: u64, u: u64, k: u64) -> String {
    format!("complexity_B{b}_U{u}_K{k}.csv")
}

pub fn to_csv(report: &ComplexityReport) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.rows {
        w.serialize(Row::from(r))
            .map_err(|e| CliError::Runtime(format!("CSV encoding: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Runtime(format!("CSV encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Builds the report, writes its CSV and returns it with the file path.
pub fn run(
    b: u64,
    u: u64,
    k: u64,
    m: u64,
    t_grid: &[u64],
    out_dir: &Path,
) -> CliResult<(ComplexityReport, PathBuf)> {
    if t_grid.is_empty() {
        return Err(CliError::Config(
            "the T grid must contain at least one value".into(),
        ));
    }
    let report =
        ComplexityReport::build(b, u, k, m, t_grid).map_err(|e| CliError::Config(e.to_string()))?;
    ensure_dir(out_dir)?;
    let path = out_dir.join(file_name(b, u, k));
    std::fs::write(&path, to_csv(&report)?)
        .map_err(|e| CliError::io(&format!("writing {}", path.display()), e))?;
    Ok((report, path))
}
