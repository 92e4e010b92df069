//! Plane-wave mmWave channels for a uniform linear array and their beamspace form.

mod generate;

pub use generate::{
    generate_channel, power_control, ChannelGenConfig, MAX_PLACEMENT_ATTEMPTS,
    POWER_CONTROL_SPREAD_DB,
};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numerics::{complex_gaussian, ComplexMatrix, FftPlan};

/// ULA response `[1, e^{jφ}, …, e^{j(B−1)φ}]` for spatial frequency `phi`.
pub fn steering_vector(phi: f64, b: usize) -> Vec<Complex64> {
    (0..b)
        .map(|n| Complex64::from_polar(1.0, n as f64 * phi))
        .collect()
}

/// Spatial frequency `π·sin θ` of a λ/2-spaced ULA, wrapped into `[−π, π)`.
pub fn spatial_frequency(theta_rad: f64) -> f64 {
    let phi = std::f64::consts::PI * theta_rad.sin();
    if phi >= std::f64::consts::PI {
        phi - 2.0 * std::f64::consts::PI
    } else {
        phi
    }
}

/// Propagation paths from the array to one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub gains: Vec<Complex64>,
    /// Spatial frequencies in radians, `[−π, π)`.
    pub spatial_freqs: Vec<f64>,
}

impl PathSet {
    pub fn new(gains: Vec<Complex64>, spatial_freqs: Vec<f64>) -> Result<Self> {
        if gains.is_empty() || gains.len() != spatial_freqs.len() {
            return Err(Error::InvalidParameter(format!(
                "path set needs matching nonempty gains/frequencies, got {} and {}",
                gains.len(),
                spatial_freqs.len()
            )));
        }
        Ok(Self {
            gains,
            spatial_freqs,
        })
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    /// Superposition `Σ α_ℓ a(φ_ℓ)`.
    pub fn channel_row(&self, b: usize) -> Vec<Complex64> {
        let mut row = vec![Complex64::new(0.0, 0.0); b];
        for (&alpha, &phi) in self.gains.iter().zip(&self.spatial_freqs) {
            for (h, a) in row.iter_mut().zip(steering_vector(phi, b)) {
                *h += alpha * a;
            }
        }
        row
    }

    fn scale(&mut self, s: f64) {
        for g in &mut self.gains {
            *g *= s;
        }
    }
}

/// Antenna-domain channel `H` (U × B) with the paths that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h: ComplexMatrix,
    pub paths: Vec<PathSet>,
    /// Angle of the dominant path per UE, degrees.
    pub ue_angles_deg: Vec<f64>,
    pub ue_distances_m: Vec<f64>,
}

impl ChannelRealization {
    /// Builds `H` row by row from explicit path sets.
    pub fn from_paths(b: usize, paths: Vec<PathSet>) -> Result<Self> {
        if b == 0 || paths.is_empty() {
            return Err(Error::InvalidParameter(
                "channel needs B >= 1 and U >= 1".into(),
            ));
        }
        let rows: Vec<_> = paths.iter().map(|p| p.channel_row(b)).collect();
        let h = ComplexMatrix::from_rows(&rows)?;
        let u = paths.len();
        Ok(Self {
            h,
            paths,
            ue_angles_deg: vec![f64::NAN; u],
            ue_distances_m: vec![f64::NAN; u],
        })
    }

    pub fn b(&self) -> usize {
        self.h.cols()
    }

    pub fn u(&self) -> usize {
        self.h.rows()
    }
}

/// Beamspace channel `H̄ = H F_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamspaceChannel {
    hbar: ComplexMatrix,
}

impl BeamspaceChannel {
    /// Wraps a matrix that is already in beamspace.
    pub fn from_matrix(hbar: ComplexMatrix) -> Self {
        Self { hbar }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.hbar
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.hbar
    }

    pub fn b(&self) -> usize {
        self.hbar.cols()
    }

    pub fn u(&self) -> usize {
        self.hbar.rows()
    }
}

/// Applies the unitary B-point FFT to every row of `h`.
pub fn to_beamspace(h: &ComplexMatrix) -> Result<BeamspaceChannel> {
    let plan = FftPlan::new(h.cols())?;
    let mut hbar = h.clone();
    for r in 0..hbar.rows() {
        // F_B is symmetric, so the row transform h F_B equals F_B h
        plan.forward(hbar.row_mut(r))?;
    }
    Ok(BeamspaceChannel { hbar })
}

/// Noisy channel estimate `√(1−ε) H + √ε Z` with `Z` i.i.d. CN(0, 1).
pub fn estimate_channel<R: Rng + ?Sized>(
    h: &ComplexMatrix,
    epsilon: f64,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    let a = (1.0 - epsilon).sqrt();
    let e = epsilon.sqrt();
    let mut out = h.clone();
    for z in out.as_mut_slice() {
        *z = a * *z + e * complex_gaussian(rng, 1.0);
    }
    Ok(out)
}

/// Smallest number of entries of `row` that together hold at least `fraction` of its energy.
pub fn energy_support_size(row: &[Complex64], fraction: f64) -> usize {
    let mut energies: Vec<f64> = row.iter().map(Complex64::norm_sqr).collect();
    let total: f64 = energies.iter().sum();
    if total == 0.0 {
        return 0;
    }
    energies.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (i, e) in energies.iter().enumerate() {
        acc += e;
        if acc >= fraction * total {
            return i + 1;
        }
    }
    row.len()
}
