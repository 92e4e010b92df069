//! `beamspace precoder-dump`: the sparse precoder of one seeded channel, as JSON.

use beamspace::channel::{estimate_channel, generate_channel, to_beamspace, ChannelGenConfig};
use beamspace::precoding::{PowerConstraint, Precoder, PrecoderKind, SparsePrecoder};
use beamspace::simulation::trial_rng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct DumpRequest {
    pub channel: ChannelGenConfig,
    pub precoder: PrecoderKind,
    pub k: usize,
    pub snr_db: f64,
    pub seed: u64,
    /// Which trial's channel to use; matches trial numbering of `ber` runs.
    pub trial: usize,
}

pub fn file_name(req: &DumpRequest) -> String {
    format!(
        "precoder_{}_K{}_seed{}_trial{}.json",
        req.precoder.name(),
        req.k,
        req.seed,
        req.trial
    )
}

/// Builds the precoder a `ber` run would use for this trial and SNR point.
pub fn build(req: &DumpRequest) -> CliResult<SparsePrecoder> {
    if !req.precoder.is_sparse() {
        return Err(CliError::Config(format!(
            "{} is dense; dump a sparse precoder instead",
            req.precoder
        )));
    }
    req.channel
        .validate()
        .map_err(|e| CliError::Config(e.to_string()))?;
    if req.k == 0 || req.k > req.channel.b {
        return Err(CliError::Config(format!(
            "k = {} violates 1 <= k <= b = {}",
            req.k, req.channel.b
        )));
    }
    let runtime = |e: beamspace::Error| CliError::Runtime(e.to_string());
    let power = PowerConstraint::UNIT;
    let mut rng = trial_rng(req.seed, req.trial);
    let realization = generate_channel(&req.channel, &mut rng).map_err(runtime)?;
    let h_est = estimate_channel(&realization.h, req.channel.epsilon, &mut rng).map_err(runtime)?;
    let hbar = to_beamspace(&h_est).map_err(runtime)?;
    let n0 = power.rho2 / 10f64.powf(req.snr_db / 10.0);
    let kappa = req.channel.u as f64 * n0 / power.rho2;
    match Precoder::build(req.precoder, &h_est, &hbar, kappa, req.k, power).map_err(runtime)? {
        Precoder::Sparse(p) => Ok(p),
        Precoder::Dense(_) => unreachable!("sparse kinds build sparse precoders"),
    }
}
