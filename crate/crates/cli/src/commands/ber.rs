//! `beamspace ber`: BER sweeps for every configured precoder and sparsity level.

use std::path::Path;

use beamspace::simulation::{run_ber_sweep, BerPoint, SimConfig};
use serde::Serialize;

use super::{ensure_dir, with_threads};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{now_rfc3339, RunManifest};

#[derive(Serialize)]
struct BerRow<'a> {
    precoder: &'a str,
    #[serde(rename = "K")]
    k: usize,
    snr_db: f64,
    ber: f64,
    bit_errors: u64,
    bits_total: u64,
    trials_discarded: u64,
}

pub fn file_name(job: &SimConfig) -> String {
    format!("ber_{}_K{}.csv", job.precoder.name(), job.k)
}

/// CSV text for one sweep.
pub fn to_csv(job: &SimConfig, points: &[BerPoint]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in points {
        w.serialize(BerRow {
            precoder: job.precoder.name(),
            k: job.k,
            snr_db: p.snr_db,
            ber: p.ber,
            bit_errors: p.bit_errors,
            bits_total: p.bits_total,
            trials_discarded: p.trials_discarded,
        })
        .map_err(|e| CliError::Runtime(format!("CSV encoding: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Runtime(format!("CSV encoding: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Runs every sweep of `cfg`, writes one CSV per sweep plus the manifest into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, threads: usize) -> CliResult<RunManifest> {
    cfg.validate()?;
    ensure_dir(out_dir)?;
    let started_at = now_rfc3339();
    let mut outputs = Vec::new();
    for job in cfg.jobs() {
        let points = with_threads(threads, || run_ber_sweep(&job))?
            .map_err(|e| CliError::Runtime(format!("{} K={}: {e}", job.precoder, job.k)))?;
        let name = file_name(&job);
        std::fs::write(out_dir.join(&name), to_csv(&job, &points)?)
            .map_err(|e| CliError::io(&format!("writing {name}"), e))?;
        eprintln!("wrote {}", out_dir.join(&name).display());
        outputs.push(name);
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: "ber".into(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        threads,
        started_at,
        finished_at: now_rfc3339(),
        outputs,
        config: serde_json::from_str(&cfg.canonical_json()).expect("canonical JSON parses"),
    };
    manifest.write(out_dir)?;
    Ok(manifest)
}
