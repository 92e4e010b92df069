//! Downlink Monte-Carlo: QAM mapping, transmission, pilot-based scaling and BER counting.
//!
//! Every trial owns a ChaCha8 stream selected by its trial index, so results
//! do not depend on how trials are spread across threads. Within a trial the
//! channel, its estimate, the data bits and unit-variance noise are drawn
//! once and reused for every SNR point and every precoder, which keeps curves
//! of different precoders directly comparable.

mod qam;

pub use qam::Constellation;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{estimate_channel, generate_channel, to_beamspace, ChannelGenConfig};
use crate::error::{Error, Result};
use crate::numerics::{complex_gaussian, ComplexMatrix, FftPlan};
use crate::precoding::{PowerConstraint, Precoder, PrecoderKind};

/// Pilot observations with a smaller magnitude are rejected.
pub const MIN_PILOT_MAGNITUDE: f64 = 1e-15;

/// `y = H x + n` with `n` i.i.d. CN(0, N0).
pub fn transmit<R: Rng + ?Sized>(
    h: &ComplexMatrix,
    x: &[Complex64],
    n0: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    let noise: Vec<Complex64> = (0..h.rows()).map(|_| complex_gaussian(rng, 1.0)).collect();
    receive(h, x, n0, &noise)
}

/// `y = H x + √N0 w` for a given unit-variance noise draw `w`.
pub fn receive(
    h: &ComplexMatrix,
    x: &[Complex64],
    n0: f64,
    unit_noise: &[Complex64],
) -> Result<Vec<Complex64>> {
    if !(n0 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "N0 must be nonnegative, got {n0}"
        )));
    }
    if unit_noise.len() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} noise samples for {} receivers",
            unit_noise.len(),
            h.rows()
        )));
    }
    let sigma = n0.sqrt();
    let mut y = h.matvec(x)?;
    for (yi, w) in y.iter_mut().zip(unit_noise) {
        *yi += sigma * w;
    }
    Ok(y)
}

/// Per-UE scaling `β_u = s_pilot / y_pilot` from the UE's own pilot observation.
pub fn estimate_beta_u(y_pilot: Complex64, s_pilot: Complex64) -> Result<Complex64> {
    let magnitude = y_pilot.norm();
    if !(magnitude >= MIN_PILOT_MAGNITUDE) {
        return Err(Error::DegeneratePilot { magnitude });
    }
    Ok(s_pilot / y_pilot)
}

/// Pilot symbol: the constellation corner direction at energy `es`.
pub fn pilot_symbol(es: f64) -> Complex64 {
    Complex64::new(1.0, 1.0) * (es / 2.0).sqrt()
}

/// Random content of one coherence block: bits per data slot and unit noise per slot.
#[derive(Debug, Clone)]
pub struct BlockData {
    /// `T − 1` data slots of `U · bits_per_symbol` bits.
    pub bits: Vec<Vec<u8>>,
    /// `T` slots of U unit-variance noise samples; slot 0 is the pilot.
    pub noise: Vec<Vec<Complex64>>,
}

impl BlockData {
    pub fn draw<R: Rng + ?Sized>(
        u: usize,
        slots: usize,
        bits_per_symbol: usize,
        rng: &mut R,
    ) -> Self {
        let mut bits = Vec::with_capacity(slots.saturating_sub(1));
        let mut noise = Vec::with_capacity(slots);
        noise.push((0..u).map(|_| complex_gaussian(rng, 1.0)).collect());
        for _ in 1..slots {
            bits.push(
                (0..u * bits_per_symbol)
                    .map(|_| rng.random_range(0..2u8))
                    .collect(),
            );
            noise.push((0..u).map(|_| complex_gaussian(rng, 1.0)).collect());
        }
        Self { bits, noise }
    }
}

/// Outcome of transmitting one block through the true channel.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOutcome {
    pub bit_errors: u64,
    pub bits: u64,
    /// Sum of `‖x‖²` over the data slots.
    pub tx_energy: f64,
    pub data_slots: usize,
    /// Equalized symbols `β_u y_u` per data slot.
    pub equalized: Vec<Vec<Complex64>>,
}

/// Sends the pilot slot and all data slots of `data`, equalizes and hard-detects.
pub fn run_block(
    h: &ComplexMatrix,
    precoder: &Precoder,
    constellation: &Constellation,
    data: &BlockData,
    n0: f64,
    es: f64,
    plan: &FftPlan,
) -> Result<BlockOutcome> {
    let u = h.rows();
    let s_pilot = pilot_symbol(es);
    let x_pilot = precoder.apply(&vec![s_pilot; u], plan)?;
    let y_pilot = receive(h, &x_pilot, n0, &data.noise[0])?;
    let betas = y_pilot
        .iter()
        .map(|&y| estimate_beta_u(y, s_pilot))
        .collect::<Result<Vec<_>>>()?;

    let mut outcome = BlockOutcome {
        bit_errors: 0,
        bits: 0,
        tx_energy: 0.0,
        data_slots: data.bits.len(),
        equalized: Vec::with_capacity(data.bits.len()),
    };
    for (bits, noise) in data.bits.iter().zip(&data.noise[1..]) {
        let s = constellation.modulate(bits)?;
        // unit-energy constellation scaled to Es
        let s: Vec<Complex64> = s.into_iter().map(|z| z * es.sqrt()).collect();
        let x = precoder.apply(&s, plan)?;
        outcome.tx_energy += x.iter().map(Complex64::norm_sqr).sum::<f64>();
        let y = receive(h, &x, n0, noise)?;
        let s_hat: Vec<Complex64> = y
            .iter()
            .zip(&betas)
            .map(|(y, b)| b * y / es.sqrt())
            .collect();
        let detected = constellation.demodulate_hard(&s_hat);
        outcome.bit_errors += detected.iter().zip(bits).filter(|(a, b)| a != b).count() as u64;
        outcome.bits += bits.len() as u64;
        outcome.equalized.push(s_hat);
    }
    Ok(outcome)
}

fn default_qam_order() -> usize {
    64
}

/// One BER sweep: a precoder, a sparsity level and a grid of `ρ²/N0` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub channel: ChannelGenConfig,
    pub precoder: PrecoderKind,
    /// Beams per column (SBP family); ignored by WF and MRT.
    pub k: usize,
    /// `ρ²/N0` grid in dB.
    pub snr_db: Vec<f64>,
    /// Channel realizations per SNR point.
    pub trials: usize,
    /// Slots per coherence block, the first one carries the pilot.
    pub slots: usize,
    #[serde(default = "default_qam_order")]
    pub qam_order: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn b(&self) -> usize {
        self.channel.b
    }

    pub fn u(&self) -> usize {
        self.channel.u
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if self.slots < 2 {
            return Err(Error::InvalidParameter(format!(
                "slots = {} must be at least 2 (pilot plus data)",
                self.slots
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidParameter(
                "snr_db must be a nonempty list of numbers".into(),
            ));
        }
        if self.precoder.is_sparse() && (self.k == 0 || self.k > self.b()) {
            return Err(Error::InvalidParameter(format!(
                "k = {} must satisfy 1 <= k <= b = {}",
                self.k,
                self.b()
            )));
        }
        Constellation::qam(self.qam_order)?;
        Ok(())
    }
}

/// BER at one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub bits_total: u64,
    pub trials_discarded: u64,
    /// Time-averaged `‖x‖²` over the data slots.
    pub mean_tx_energy: f64,
}

/// Seeds the RNG of one trial; stream index = trial index.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    bit_errors: u64,
    bits: u64,
    discarded: u64,
    tx_energy: f64,
    data_slots: u64,
}

fn run_trial(
    cfg: &SimConfig,
    trial: usize,
    constellation: &Constellation,
    plan: &FftPlan,
) -> Result<Vec<Tally>> {
    let power = PowerConstraint::UNIT;
    let mut rng = trial_rng(cfg.seed, trial);
    let realization = generate_channel(&cfg.channel, &mut rng)?;
    let h_est = estimate_channel(&realization.h, cfg.channel.epsilon, &mut rng)?;
    let hbar_est = to_beamspace(&h_est)?;
    let data = BlockData::draw(
        cfg.u(),
        cfg.slots,
        constellation.bits_per_symbol(),
        &mut rng,
    );

    cfg.snr_db
        .iter()
        .map(|&snr_db| {
            let n0 = power.rho2 / 10f64.powf(snr_db / 10.0);
            let kappa = cfg.u() as f64 * n0 / power.rho2;
            let precoder = Precoder::build(cfg.precoder, &h_est, &hbar_est, kappa, cfg.k, power)?;
            match run_block(
                &realization.h,
                &precoder,
                constellation,
                &data,
                n0,
                power.es,
                plan,
            ) {
                Ok(out) => Ok(Tally {
                    bit_errors: out.bit_errors,
                    bits: out.bits,
                    discarded: 0,
                    tx_energy: out.tx_energy,
                    data_slots: out.data_slots as u64,
                }),
                Err(Error::DegeneratePilot { .. }) => Ok(Tally {
                    discarded: 1,
                    ..Tally::default()
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Runs the BER sweep on the current rayon pool.
///
/// Per trial: draw a channel, form the estimate, build the precoder from the
/// estimate with `κ = U·N0/ρ²` (ρ² = 1), send one pilot slot and `T − 1`
/// data slots through the true channel, scale by `β_u` and hard-detect.
/// Counts are reduced in trial order, so the result is independent of the
/// number of worker threads.
pub fn run_ber_sweep(cfg: &SimConfig) -> Result<Vec<BerPoint>> {
    cfg.validate()?;
    let constellation = Constellation::qam(cfg.qam_order)?;
    let plan = FftPlan::new(cfg.b())?;
    let per_trial: Vec<Vec<Tally>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, &constellation, &plan))
        .collect::<Result<_>>()?;

    Ok(cfg
        .snr_db
        .iter()
        .enumerate()
        .map(|(i, &snr_db)| {
            let mut total = Tally::default();
            for trial in &per_trial {
                let t = trial[i];
                total.bit_errors += t.bit_errors;
                total.bits += t.bits;
                total.discarded += t.discarded;
                total.tx_energy += t.tx_energy;
                total.data_slots += t.data_slots;
            }
            BerPoint {
                snr_db,
                ber: if total.bits > 0 {
                    total.bit_errors as f64 / total.bits as f64
                } else {
                    f64::NAN
                },
                bit_errors: total.bit_errors,
                bits_total: total.bits,
                trials_discarded: total.discarded,
                mean_tx_energy: if total.data_slots > 0 {
                    total.tx_energy / total.data_slots as f64
                } else {
                    f64::NAN
                },
            }
        })
        .collect())
}

/// SNR (dB) where the BER curve first drops to `target`, interpolating `log10(BER)` linearly.
///
/// Returns `None` when the curve never reaches the target. A point with zero
/// errors counts as below every positive target.
pub fn snr_at_ber(points: &[BerPoint], target: f64) -> Option<f64> {
    let mut prev: Option<&BerPoint> = None;
    for p in points {
        if p.ber <= target {
            return Some(match prev {
                None => p.snr_db,
                Some(q) if p.ber <= 0.0 || q.ber <= 0.0 => p.snr_db,
                Some(q) => {
                    let (l0, l1, lt) = (q.ber.log10(), p.ber.log10(), target.log10());
                    if (l0 - l1).abs() < f64::EPSILON {
                        p.snr_db
                    } else {
                        q.snr_db + (lt - l0) / (l1 - l0) * (p.snr_db - q.snr_db)
                    }
                }
            });
        }
        prev = Some(p);
    }
    None
}
