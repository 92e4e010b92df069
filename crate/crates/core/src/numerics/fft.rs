//! Unitary DFT: dense matrix form and a radix-2 decimation-in-time FFT.
//!
//! Both directions carry the symmetric `1/√N` scaling so that `fft` applies
//! `F_N` and `ifft` applies `F_Nᴴ`, with `F[n, m] = exp(−j2πnm/N)/√N`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// The `N × N` unitary DFT matrix.
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "DFT size must be at least 1");
    let scale = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |r, c| {
        // reduce the exponent first to keep the angle small
        let k = (r * c) % n;
        Complex64::from_polar(scale, -2.0 * PI * k as f64 / n as f64)
    })
}

/// Precomputed twiddles and bit-reversal permutation for one transform length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    log2n: u32,
    twiddles: Vec<Complex64>,
    scale: f64,
}

impl FftPlan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::FftSize(n));
        }
        let twiddles = (0..n / 2)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / n as f64))
            .collect();
        Ok(Self {
            n,
            log2n: n.trailing_zeros(),
            twiddles,
            scale: 1.0 / (n as f64).sqrt(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place `v ← F_N v`.
    pub fn forward(&self, v: &mut [Complex64]) -> Result<()> {
        self.transform(v, false)
    }

    /// In-place `v ← F_Nᴴ v`.
    pub fn inverse(&self, v: &mut [Complex64]) -> Result<()> {
        self.transform(v, true)
    }

    fn transform(&self, v: &mut [Complex64], inverse: bool) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "plan length {} applied to vector of length {}",
                self.n,
                v.len()
            )));
        }
        let n = self.n;
        if n == 1 {
            return Ok(());
        }
        let shift = usize::BITS - self.log2n;
        for i in 0..n {
            let j = i.reverse_bits() >> shift;
            if j > i {
                v.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let a = v[start + k];
                    let b = v[start + k + half] * w;
                    v[start + k] = a + b;
                    v[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
        for z in v.iter_mut() {
            *z *= self.scale;
        }
        Ok(())
    }
}

/// Unitary forward transform `F_N v`.
pub fn fft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = FftPlan::new(v.len())?;
    let mut out = v.to_vec();
    plan.forward(&mut out)?;
    Ok(out)
}

/// Unitary inverse transform `F_Nᴴ v`.
pub fn ifft(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let plan = FftPlan::new(v.len())?;
    let mut out = v.to_vec();
    plan.inverse(&mut out)?;
    Ok(out)
}
