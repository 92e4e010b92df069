//! Real-valued multiplication counts of the precoding methods and speed-up versus MRT.
//!
//! Counts are split into preprocessing (computing the precoding matrix once
//! per coherence block) and precoding (applying it to `T` symbol vectors).
//! A B-point (I)FFT costs `2B·log₂B`. RS shares the SBP row and 1S-RS shares
//! the 1S-SBP row. The summations are evaluated in closed form through power
//! sums, so every count is an exact integer.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precoding::PrecoderKind;

/// Multiplication counts. Signed because a few rows go negative for `K < U`.
pub type Count = i128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "WF")]
    Wf,
    #[serde(rename = "MRT")]
    Mrt,
    /// Formula only; the precoder itself is not implemented.
    #[serde(rename = "LocalWF")]
    LocalWf,
    /// Formula only.
    #[serde(rename = "QR")]
    Qr,
    /// Formula only.
    #[serde(rename = "GBS")]
    Gbs,
    #[serde(rename = "SBP")]
    Sbp,
    #[serde(rename = "1S-SBP")]
    OneShotSbp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Wf,
        Algorithm::Mrt,
        Algorithm::LocalWf,
        Algorithm::Qr,
        Algorithm::Gbs,
        Algorithm::Sbp,
        Algorithm::OneShotSbp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Wf => "WF",
            Algorithm::Mrt => "MRT",
            Algorithm::LocalWf => "LocalWF",
            Algorithm::Qr => "QR",
            Algorithm::Gbs => "GBS",
            Algorithm::Sbp => "SBP",
            Algorithm::OneShotSbp => "1S-SBP",
        }
    }

    /// Row that accounts for a simulated precoder.
    pub fn for_precoder(kind: PrecoderKind) -> Self {
        match kind {
            PrecoderKind::Wf => Algorithm::Wf,
            PrecoderKind::Mrt => Algorithm::Mrt,
            PrecoderKind::Sbp | PrecoderKind::Rs => Algorithm::Sbp,
            PrecoderKind::OneShotSbp | PrecoderKind::OneShotRs => Algorithm::OneShotSbp,
        }
    }

    /// Rows whose algorithm exists here only as a complexity formula.
    pub fn formula_only(self) -> bool {
        matches!(self, Algorithm::LocalWf | Algorithm::Qr | Algorithm::Gbs)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// System dimensions entering the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityInput {
    pub b: u64,
    pub u: u64,
    pub k: u64,
    /// Transmissions per coherence block.
    pub t: u64,
    /// Average nonzeros of the local WF precoding matrix.
    pub m: u64,
}

impl ComplexityInput {
    pub fn validate(&self) -> Result<()> {
        if !self.b.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "B = {} must be a power of two",
                self.b
            )));
        }
        for (name, v) in [("U", self.u), ("K", self.k), ("T", self.t), ("M", self.m)] {
            if v == 0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be at least 1"
                )));
            }
        }
        Ok(())
    }

    fn log2_b(&self) -> Count {
        self.b.trailing_zeros() as Count
    }
}

/// `Σ_{i=0}^{n−1} i^p` for `p ≤ 3`, zero when `n ≤ 0`.
fn power_sum(p: u32, n: Count) -> Count {
    if n <= 0 {
        return 0;
    }
    match p {
        0 => n,
        1 => n * (n - 1) / 2,
        2 => (n - 1) * n * (2 * n - 1) / 6,
        3 => {
            let s1 = n * (n - 1) / 2;
            s1 * s1
        }
        _ => unreachable!("power sums above cubes are not needed"),
    }
}

/// `Σ_{i=1}^{U} (i−1)(1 + 2(U−i))`, shared by the Householder QR rows.
fn householder_sum(u: Count) -> Count {
    (2 * u - 1) * power_sum(1, u) - 2 * power_sum(2, u)
}

/// `Σ_{i=0}^{U−1} (U−i)`.
fn triangular(u: Count) -> Count {
    u * (u + 1) / 2
}

/// `(preprocessing, precoding)` real multiplications.
pub fn count_multiplications(alg: Algorithm, input: &ComplexityInput) -> Result<(Count, Count)> {
    input.validate()?;
    let (b, u, k, t, m) = (
        input.b as Count,
        input.u as Count,
        input.k as Count,
        input.t as Count,
        input.m as Count,
    );
    let lb = input.log2_b();
    let fft = 2 * b * lb;
    let dense_precoding = 4 * t * b * u;
    let sparse_precoding = 4 * t * k * u + t * fft;

    Ok(match alg {
        Algorithm::Wf => (
            2 * u.pow(3) + 6 * b * u * u - 2 * u * (u + 1) + 1,
            dense_precoding,
        ),
        Algorithm::Mrt => (0, dense_precoding),
        Algorithm::LocalWf => (
            u * fft + 2 * u.pow(3) + 6 * k * u * u - 2 * u * (u + 1) + 1,
            4 * t * m * u + t * fft,
        ),
        Algorithm::Qr => {
            // Σ_{i=0}^{B−K−1} (B−i) Σ_{j=0}^{U−1} (B−i−j)(U−j), with c = B − i running over K+1..=B
            let (s1u, s2u) = (power_sum(1, u), power_sum(2, u));
            let (sum_c, sum_c2) = if b > k {
                (
                    power_sum(1, b + 1) - power_sum(1, k + 1),
                    power_sum(2, b + 1) - power_sum(2, k + 1),
                )
            } else {
                (0, 0)
            };
            let nested = (u * u - s1u) * sum_c2 + (s2u - u * s1u) * sum_c;
            (
                u * fft + 4 * householder_sum(u) + 12 * nested + 4 * u * u + 4 * k * triangular(u),
                sparse_precoding,
            )
        }
        Algorithm::Gbs => {
            // Σ_{j=0}^{U−1} (K−j)(U−j)
            let pairs = k * u * u - (k + u) * power_sum(1, u) + power_sum(2, u);
            (
                u * fft + 12 * pairs + 4 * u * u + 4 * householder_sum(u) + 4 * k * triangular(u),
                sparse_precoding,
            )
        }
        Algorithm::Sbp => {
            // Σ_{κ=1}^{K} (κ³ + 3Uκ² − (U+1)κ + 1)
            let n = k + 1;
            let iterations =
                power_sum(3, n) + 3 * u * power_sum(2, n) - (u + 1) * power_sum(1, n) + k;
            (
                u * fft + 4 * k * b * (u + 2) + 2 * u * k * (k + 1) + 2 * iterations,
                sparse_precoding,
            )
        }
        Algorithm::OneShotSbp => (
            u * fft + u * (4 * b * (u + 2) + 2 * k.pow(3) + 6 * u * k * k - 2 * (u + 1) * k + 1),
            sparse_precoding,
        ),
    })
}

/// Total multiplications over one coherence block of `T` transmissions.
pub fn total(alg: Algorithm, input: &ComplexityInput) -> Result<Count> {
    let (pre, prec) = count_multiplications(alg, input)?;
    Ok(pre + prec)
}

/// `total_MRT(T) / total_alg(T)`.
pub fn speedup_vs_mrt(alg: Algorithm, input: &ComplexityInput) -> Result<f64> {
    let mrt = total(Algorithm::Mrt, input)?;
    let other = total(alg, input)?;
    Ok(mrt as f64 / other as f64)
}

/// Asymptotic (`T → ∞`) speed-up of the two-stage sparse precoders, `2BU / (B·log₂B + 2UK)`.
pub fn gamma(b: u64, u: u64, k: u64) -> Result<f64> {
    if !b.is_power_of_two() || u == 0 || k == 0 {
        return Err(Error::InvalidParameter(format!(
            "gamma needs B a power of two and U, K >= 1, got B = {b}, U = {u}, K = {k}"
        )));
    }
    let (b, u, k) = (b as f64, u as f64, k as f64);
    Ok(2.0 * b * u / (b * b.log2() + 2.0 * u * k))
}

/// One line of a complexity table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub algorithm: Algorithm,
    pub t: u64,
    pub preprocessing: Count,
    pub precoding: Count,
    pub total: Count,
    pub speedup: f64,
}

/// Counts for every algorithm over a grid of block lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub b: u64,
    pub u: u64,
    pub k: u64,
    pub m: u64,
    pub gamma: f64,
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityReport {
    /// Rows are ordered by algorithm, then by `T` as given.
    pub fn build(b: u64, u: u64, k: u64, m: u64, t_grid: &[u64]) -> Result<Self> {
        if t_grid.is_empty() {
            return Err(Error::InvalidParameter("T grid must not be empty".into()));
        }
        let mut rows = Vec::with_capacity(Algorithm::ALL.len() * t_grid.len());
        for alg in Algorithm::ALL {
            for &t in t_grid {
                let input = ComplexityInput { b, u, k, t, m };
                let (pre, prec) = count_multiplications(alg, &input)?;
                rows.push(ComplexityRow {
                    algorithm: alg,
                    t,
                    preprocessing: pre,
                    precoding: prec,
                    total: pre + prec,
                    speedup: speedup_vs_mrt(alg, &input)?,
                });
            }
        }
        Ok(Self {
            b,
            u,
            k,
            m,
            gamma: gamma(b, u, k)?,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(b: u64, u: u64, k: u64, t: u64) -> ComplexityInput {
        ComplexityInput { b, u, k, t, m: 1 }
    }

    #[test]
    fn mrt_row() {
        let i = input(64, 8, 8, 10);
        assert_eq!(
            count_multiplications(Algorithm::Mrt, &i).unwrap(),
            (0, 4 * 10 * 64 * 8)
        );
        assert_eq!(speedup_vs_mrt(Algorithm::Mrt, &i).unwrap(), 1.0);
    }

    #[test]
    fn wf_preprocessing_at_128_antennas_16_users() {
        let (pre, _) = count_multiplications(Algorithm::Wf, &input(128, 16, 16, 1)).unwrap();
        assert_eq!(pre, 204_257);
    }

    #[test]
    fn sbp_precoding_single_slot() {
        let (_, prec) = count_multiplications(Algorithm::Sbp, &input(128, 16, 16, 1)).unwrap();
        assert_eq!(prec, 2816);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(128, 16, 16).unwrap() - 4096.0 / 1408.0).abs() < 1e-12);
        assert!((gamma(128, 16, 32).unwrap() - 4096.0 / 1920.0).abs() < 1e-12);
        assert_eq!(gamma(2, 1, 1).unwrap(), 1.0);
        assert!(gamma(100, 16, 16).is_err());
    }

    #[test]
    fn invalid_input() {
        assert!(count_multiplications(Algorithm::Wf, &input(96, 16, 16, 1)).is_err());
        assert!(count_multiplications(Algorithm::Wf, &input(128, 0, 16, 1)).is_err());
    }

    #[test]
    fn power_sums() {
        assert_eq!(power_sum(1, 5), 10);
        assert_eq!(power_sum(2, 4), 14);
        assert_eq!(power_sum(3, 4), 36);
        assert_eq!(power_sum(2, 0), 0);
        assert_eq!(power_sum(1, -3), 0);
    }

    #[test]
    fn report_layout() {
        let r = ComplexityReport::build(128, 16, 16, 100, &[1, 10]).unwrap();
        assert_eq!(r.rows.len(), 14);
        assert!(r
            .rows
            .iter()
            .all(|row| row.total == row.preprocessing + row.precoding));
        assert_eq!(r.rows[0].algorithm, Algorithm::Wf);
        assert_eq!(r.rows[1].t, 10);
    }
}
