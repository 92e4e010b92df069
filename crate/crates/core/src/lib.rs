//! Sparse beamspace precoding for the mmWave massive MU-MIMO downlink.
//!
//! The crate covers the full processing chain used to evaluate two-stage
//! beamspace precoders:
//!
//! - [`numerics`]: complex matrices, Cholesky-based ridge least squares and a unitary radix-2 FFT.
//! - [`channel`]: plane-wave ULA channels with UE placement, power control and estimation error.
//! - [`precoding`]: Wiener filter and MRT baselines, the four sparse beamspace precoders
//!   (SBP, RS and their one-shot variants) and the sparse matvec + FFT application path.
//! - [`simulation`]: Gray-coded QAM, downlink transmission and the seeded BER Monte-Carlo sweep.
//! - [`complexity`]: real-multiplication counts of the precoding methods and speed-up versus MRT.

pub mod channel;
pub mod complexity;
mod error;
pub mod numerics;
pub mod precoding;
pub mod simulation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
