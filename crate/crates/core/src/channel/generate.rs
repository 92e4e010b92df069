use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{spatial_frequency, ChannelRealization, PathSet};
use crate::error::{Error, Result};
use crate::numerics::complex_gaussian;

/// Largest spread between the strongest and weakest UE channel norm after power control.
pub const POWER_CONTROL_SPREAD_DB: f64 = 6.0;

/// Angle draws allowed per UE before placement gives up.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 10_000;

/// Average power of each reflected path relative to the LoS path.
const REFLECTION_POWER: f64 = 0.1;

/// Parameters of the synthetic plane-wave channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelGenConfig {
    /// Number of BS antennas.
    pub b: usize,
    /// Number of single-antenna UEs.
    pub u: usize,
    /// Paths per UE; defaults to 4 with LoS and 8 without.
    #[serde(default)]
    pub paths: Option<usize>,
    #[serde(default = "defaults::los")]
    pub los: bool,
    #[serde(default = "defaults::sector_halfangle_deg")]
    pub sector_halfangle_deg: f64,
    #[serde(default = "defaults::min_separation_deg")]
    pub min_separation_deg: f64,
    #[serde(default = "defaults::min_dist_m")]
    pub min_dist_m: f64,
    #[serde(default = "defaults::max_dist_m")]
    pub max_dist_m: f64,
    /// Channel estimation error weight.
    #[serde(default = "defaults::epsilon")]
    pub epsilon: f64,
}

mod defaults {
    pub fn los() -> bool {
        true
    }
    pub fn sector_halfangle_deg() -> f64 {
        60.0
    }
    pub fn min_separation_deg() -> f64 {
        1.0
    }
    pub fn min_dist_m() -> f64 {
        25.0
    }
    pub fn max_dist_m() -> f64 {
        112.0
    }
    pub fn epsilon() -> f64 {
        0.0099
    }
}

impl ChannelGenConfig {
    /// 120° sector, 25–112 m, 1° separation and ε = 0.0099.
    pub fn new(b: usize, u: usize, los: bool) -> Self {
        Self {
            b,
            u,
            paths: None,
            los,
            sector_halfangle_deg: defaults::sector_halfangle_deg(),
            min_separation_deg: defaults::min_separation_deg(),
            min_dist_m: defaults::min_dist_m(),
            max_dist_m: defaults::max_dist_m(),
            epsilon: defaults::epsilon(),
        }
    }

    pub fn path_count(&self) -> usize {
        self.paths.unwrap_or(if self.los { 4 } else { 8 })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.b == 0 || !self.b.is_power_of_two() {
            return bad(format!("b = {} must be a power of two", self.b));
        }
        if self.u == 0 {
            return bad("u must be at least 1".into());
        }
        if self.path_count() == 0 {
            return bad("paths must be at least 1".into());
        }
        if !(self.sector_halfangle_deg > 0.0 && self.sector_halfangle_deg <= 90.0) {
            return bad(format!(
                "sector_halfangle_deg = {} must lie in (0, 90]",
                self.sector_halfangle_deg
            ));
        }
        if !(self.min_separation_deg > 0.0) {
            return bad(format!(
                "min_separation_deg = {} must be positive",
                self.min_separation_deg
            ));
        }
        if self.u as f64 * self.min_separation_deg >= 2.0 * self.sector_halfangle_deg {
            return bad(format!(
                "{} UEs with {} deg separation do not fit in a {} deg sector",
                self.u,
                self.min_separation_deg,
                2.0 * self.sector_halfangle_deg
            ));
        }
        if !(self.min_dist_m > 0.0 && self.max_dist_m >= self.min_dist_m) {
            return bad(format!(
                "distances must satisfy 0 < min_dist_m <= max_dist_m, got {} and {}",
                self.min_dist_m, self.max_dist_m
            ));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad(format!("epsilon = {} must lie in [0, 1]", self.epsilon));
        }
        Ok(())
    }
}

/// Draws UE positions and paths, applies power control and returns the channel.
///
/// Each UE gets an azimuth uniform in the sector, redrawn until it is at least
/// `min_separation_deg` away from every UE placed before it, and a distance
/// uniform over the annular sector area. With LoS the first path has unit
/// magnitude and the remaining ones are CN(0, 0.1); without LoS all paths are
/// CN(0, 1). Distance sets a `d_min/d` amplitude, rows are then clamped into
/// the power-control window and the whole matrix is scaled to unit average
/// entry power. The scaling is folded into the path gains, so every row of
/// `h` is exactly the superposition of its stored paths.
pub fn generate_channel<R: Rng + ?Sized>(
    cfg: &ChannelGenConfig,
    rng: &mut R,
) -> Result<ChannelRealization> {
    cfg.validate()?;
    let half = cfg.sector_halfangle_deg;
    let n_paths = cfg.path_count();

    let mut angles: Vec<f64> = Vec::with_capacity(cfg.u);
    for _ in 0..cfg.u {
        let mut placed = false;
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            let theta = rng.random_range(-half..half);
            if angles
                .iter()
                .all(|a| (a - theta).abs() >= cfg.min_separation_deg)
            {
                angles.push(theta);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::PlacementFailed {
                users: cfg.u,
                min_separation_deg: cfg.min_separation_deg,
                attempts: MAX_PLACEMENT_ATTEMPTS,
            });
        }
    }

    let (d2_min, d2_max) = (cfg.min_dist_m.powi(2), cfg.max_dist_m.powi(2));
    let mut distances = Vec::with_capacity(cfg.u);
    let mut path_sets = Vec::with_capacity(cfg.u);
    for &theta in &angles {
        let d = if d2_max > d2_min {
            rng.random_range(d2_min..d2_max).sqrt()
        } else {
            cfg.min_dist_m
        };
        distances.push(d);

        let mut gains = Vec::with_capacity(n_paths);
        let mut freqs = Vec::with_capacity(n_paths);
        for l in 0..n_paths {
            let gain = if cfg.los && l == 0 {
                Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
            } else if cfg.los {
                complex_gaussian(rng, REFLECTION_POWER)
            } else {
                complex_gaussian(rng, 1.0)
            };
            let path_theta = if l == 0 {
                theta
            } else {
                rng.random_range(-half..half)
            };
            gains.push(gain);
            freqs.push(spatial_frequency(path_theta.to_radians()));
        }
        let mut set = PathSet::new(gains, freqs)?;
        set.scale(cfg.min_dist_m / d);
        path_sets.push(set);
    }

    let norms: Vec<f64> = path_sets
        .iter()
        .map(|p| crate::numerics::norm(&p.channel_row(cfg.b)))
        .collect();
    let controlled = power_control(&norms, POWER_CONTROL_SPREAD_DB);
    let energy: f64 = controlled.iter().map(|n| n * n).sum();
    let global = ((cfg.u * cfg.b) as f64 / energy).sqrt();
    for ((set, &before), &after) in path_sets.iter_mut().zip(&norms).zip(&controlled) {
        set.scale(global * after / before);
    }

    let mut realization = ChannelRealization::from_paths(cfg.b, path_sets)?;
    realization.ue_angles_deg = angles;
    realization.ue_distances_m = distances;
    Ok(realization)
}

/// Clamps each norm into a window of `spread_db` centered (in dB) on the geometric mean.
///
/// Norms already inside the window are left untouched.
pub fn power_control(norms: &[f64], spread_db: f64) -> Vec<f64> {
    if norms.is_empty() {
        return Vec::new();
    }
    let log_mean = norms.iter().map(|n| n.ln()).sum::<f64>() / norms.len() as f64;
    let center = log_mean.exp();
    let half = 10f64.powf(spread_db / 40.0);
    let (lo, hi) = (center / half, center * half);
    norms.iter().map(|&n| n.clamp(lo, hi)).collect()
}
