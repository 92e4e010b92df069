//! Experiment definition files.
//!
//! A config is a TOML document; unknown keys anywhere are rejected.
//!
//! ```toml
//! seed = 1
//! trials = 48
//! slots = 24
//! qam_order = 64
//! snr_db = [0.0, 5.0, 10.0]
//! precoders = ["WF", "SBP", "MRT"]
//! k = [16, 32]
//!
//! [channel]
//! b = 128
//! u = 16
//! los = true
//! ```

use std::path::Path;

use beamspace::channel::ChannelGenConfig;
use beamspace::precoding::PrecoderKind;
use beamspace::simulation::SimConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

fn default_qam_order() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Channel realizations per SNR point.
    pub trials: usize,
    /// Slots per coherence block including the pilot slot.
    pub slots: usize,
    #[serde(default = "default_qam_order")]
    pub qam_order: usize,
    /// `ρ²/N0` grid in dB.
    pub snr_db: Vec<f64>,
    pub precoders: Vec<PrecoderKind>,
    /// Sparsity levels for the sparse precoders; dense ones always use K = B.
    #[serde(default)]
    pub k: Vec<usize>,
    pub channel: ChannelGenConfig,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> CliResult<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.precoders.is_empty() {
            return bad("precoders must list at least one precoder".into());
        }
        for (i, p) in self.precoders.iter().enumerate() {
            if self.precoders[..i].contains(p) {
                return bad(format!("precoders lists {p} twice"));
            }
        }
        if self.precoders.iter().any(|p| p.is_sparse()) && self.k.is_empty() {
            return bad(
                "k must list at least one sparsity level when a sparse precoder is configured"
                    .into(),
            );
        }
        for &k in &self.k {
            if k == 0 || k > self.channel.b {
                return bad(format!("k = {k} violates 1 <= k <= b = {}", self.channel.b));
            }
        }
        for job in self.jobs() {
            job.validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    /// One sweep per dense precoder and per (sparse precoder, K) pair, in file order.
    pub fn jobs(&self) -> Vec<SimConfig> {
        let mut jobs = Vec::new();
        for &precoder in &self.precoders {
            let ks = if precoder.is_sparse() {
                self.k.clone()
            } else {
                vec![self.channel.b]
            };
            for k in ks {
                jobs.push(SimConfig {
                    channel: self.channel.clone(),
                    precoder,
                    k,
                    snr_db: self.snr_db.clone(),
                    trials: self.trials,
                    slots: self.slots,
                    qam_order: self.qam_order,
                    seed: self.seed,
                });
            }
        }
        jobs
    }

    /// JSON with keys in sorted order, so equal configs serialize identically.
    pub fn canonical_json(&self) -> String {
        // serde_json's default map is ordered by key
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    /// Hex SHA-256 of [`ExperimentConfig::canonical_json`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
seed = 3
trials = 4
slots = 5
snr_db = [0.0, 10.0]
precoders = ["WF", "SBP", "1S-RS"]
k = [4, 8]

[channel]
b = 32
u = 4
"#;

    #[test]
    fn parses_and_expands_jobs() {
        let cfg = ExperimentConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg.qam_order, 64);
        let jobs: Vec<(PrecoderKind, usize)> =
            cfg.jobs().iter().map(|j| (j.precoder, j.k)).collect();
        assert_eq!(
            jobs,
            vec![
                (PrecoderKind::Wf, 32),
                (PrecoderKind::Sbp, 4),
                (PrecoderKind::Sbp, 8),
                (PrecoderKind::OneShotRs, 4),
                (PrecoderKind::OneShotRs, 8),
            ]
        );
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ExperimentConfig::from_toml_str(&format!("{MINIMAL}\nsed = 1\n")).unwrap_err();
        assert!(err.to_string().contains("sed"), "{err}");
        let err = ExperimentConfig::from_toml_str(&MINIMAL.replace("u = 4", "u = 4\nlos_ = true"))
            .unwrap_err();
        assert!(err.to_string().contains("los_"), "{err}");
    }

    #[test]
    fn bound_violations_name_the_bound() {
        let err = ExperimentConfig::from_toml_str(&MINIMAL.replace("k = [4, 8]", "k = [4, 64]"))
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(
            err.to_string().contains("k = 64 violates 1 <= k <= b = 32"),
            "{err}"
        );
        let err = ExperimentConfig::from_toml_str(&MINIMAL.replace("slots = 5", "slots = 1"))
            .unwrap_err();
        assert!(err.to_string().contains("slots"), "{err}");
        let err =
            ExperimentConfig::from_toml_str(&MINIMAL.replace("b = 32", "b = 48")).unwrap_err();
        assert!(err.to_string().contains("power of two"), "{err}");
    }

    #[test]
    fn hash_ignores_key_order() {
        let a = ExperimentConfig::from_toml_str(MINIMAL).unwrap();
        let reordered = r#"
precoders = ["WF", "SBP", "1S-RS"]
k = [4, 8]
snr_db = [0.0, 10.0]
slots = 5
trials = 4
seed = 3

[channel]
u = 4
b = 32
"#;
        let b = ExperimentConfig::from_toml_str(reordered).unwrap();
        assert_eq!(a.hash(), b.hash());
        let mut c = a.clone();
        c.seed = 4;
        assert_ne!(a.hash(), c.hash());
    }
}
