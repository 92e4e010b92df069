//! Dense complex linear algebra, ridge least squares and the unitary DFT.

mod fft;
mod matrix;
mod ridge;

pub use fft::{dft_matrix, fft, ifft, FftPlan};
pub use matrix::{dot_conj, norm, ComplexMatrix};
pub use ridge::{add_diagonal, ridge_ls, Cholesky, SINGULAR_PIVOT_RATIO};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Draws a circularly-symmetric complex Gaussian sample with the given variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}
