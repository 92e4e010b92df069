//! Linear precoders: Wiener filter and MRT baselines plus the sparse beamspace family.
//!
//! Every constructor works on a channel estimate and returns a precoder
//! normalized so that `tr(PᴴP)·Es = ρ²`. Dense precoders act in the antenna
//! domain; sparse ones act in beamspace and are followed by one FFT of length B.

mod apply;
mod json;
mod linear;
mod sparse;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use apply::{apply_dense, apply_two_stage, apply_two_stage_with_plan};
pub use json::SparsePrecoderJson;
pub use linear::{mrt, wf};
pub use sparse::{
    mmv_omp, omp_column, one_shot_rs, one_shot_sbp, rs, sbp, top_k_indices, MmvTrace,
    OmpColumnTrace,
};

use crate::channel::BeamspaceChannel;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, FftPlan};

/// Normalization below this trace is treated as a zero matrix.
pub const ZERO_TRACE: f64 = 1e-30;

/// Symbol energy `Es` and transmit power budget `ρ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerConstraint {
    pub es: f64,
    pub rho2: f64,
}

impl PowerConstraint {
    pub const UNIT: Self = Self { es: 1.0, rho2: 1.0 };

    /// `β = √(tr(QᴴQ)·Es/ρ²)` for a matrix with the given `tr(QᴴQ)`.
    pub fn beta(&self, trace: f64) -> Result<f64> {
        if !(self.es > 0.0 && self.rho2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Es and rho^2 must be positive, got {} and {}",
                self.es, self.rho2
            )));
        }
        if !(trace >= ZERO_TRACE) {
            return Err(Error::ZeroPrecoder);
        }
        Ok((trace * self.es / self.rho2).sqrt())
    }
}

impl Default for PowerConstraint {
    fn default() -> Self {
        Self::UNIT
    }
}

/// Scales `q` to meet the power constraint with equality, returning `(Q/β, β)`.
pub fn normalize(q: &ComplexMatrix, power: PowerConstraint) -> Result<(ComplexMatrix, f64)> {
    let beta = power.beta(q.frobenius_norm_sqr())?;
    Ok((q.scaled(1.0 / beta), beta))
}

/// `‖H Q − I‖_F² + κ‖Q‖_F²`, the regularized objective the WF precoder minimizes.
pub fn ridge_objective(h: &ComplexMatrix, q: &ComplexMatrix, kappa: f64) -> Result<f64> {
    let mut hq = h.matmul(q)?;
    for i in 0..hq.rows().min(hq.cols()) {
        hq[(i, i)] -= 1.0;
    }
    Ok(hq.frobenius_norm_sqr() + kappa * q.frobenius_norm_sqr())
}

/// Domain a dense precoding matrix maps into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Antenna,
    Beamspace,
}

/// Normalized dense precoder `P = Q/β`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePrecoder {
    pub p: ComplexMatrix,
    pub domain: Domain,
    pub beta: f64,
}

impl DensePrecoder {
    pub fn from_unnormalized(
        q: &ComplexMatrix,
        domain: Domain,
        power: PowerConstraint,
    ) -> Result<Self> {
        let (p, beta) = normalize(q, power)?;
        Ok(Self { p, domain, beta })
    }
}

/// Sparsity pattern of a beamspace precoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparseStructure {
    /// Every column has its own support of K beams.
    ColumnSparse,
    /// K shared rows carry all U entries; the remaining rows are zero.
    RowStructured,
}

/// Nonzero storage of a sparse beamspace precoder.
#[derive(Debug, Clone, PartialEq)]
pub enum SparseLayout {
    ColumnSparse {
        /// Strictly increasing beam indices per column.
        supports: Vec<Vec<usize>>,
        /// Values aligned with `supports`.
        values: Vec<Vec<Complex64>>,
    },
    RowStructured {
        /// Strictly increasing nonzero row indices.
        rows: Vec<usize>,
        /// K × U values, row `i` belongs to beam `rows[i]`.
        values: ComplexMatrix,
    },
}

/// Normalized sparse beamspace precoder `P̄` with exactly `K·U` stored entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePrecoder {
    b: usize,
    u: usize,
    k: usize,
    beta: f64,
    layout: SparseLayout,
}

impl SparsePrecoder {
    /// Normalizes an unnormalized layout and checks the support invariants.
    pub fn from_unnormalized(
        b: usize,
        layout: SparseLayout,
        power: PowerConstraint,
    ) -> Result<Self> {
        let (u, k) = check_layout(b, &layout)?;
        let trace = match &layout {
            SparseLayout::ColumnSparse { values, .. } => {
                values.iter().flatten().map(Complex64::norm_sqr).sum()
            }
            SparseLayout::RowStructured { values, .. } => values.frobenius_norm_sqr(),
        };
        let beta = power.beta(trace)?;
        let mut layout = layout;
        let inv = 1.0 / beta;
        match &mut layout {
            SparseLayout::ColumnSparse { values, .. } => {
                values.iter_mut().flatten().for_each(|v| *v *= inv);
            }
            SparseLayout::RowStructured { values, .. } => values.scale(inv),
        }
        Ok(Self {
            b,
            u,
            k,
            beta,
            layout,
        })
    }

    /// Rebuilds a precoder from already-normalized parts, checking invariants.
    pub fn from_parts(b: usize, beta: f64, layout: SparseLayout) -> Result<Self> {
        let (u, k) = check_layout(b, &layout)?;
        if !(beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        Ok(Self {
            b,
            u,
            k,
            beta,
            layout,
        })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn layout(&self) -> &SparseLayout {
        &self.layout
    }

    pub fn structure(&self) -> SparseStructure {
        match self.layout {
            SparseLayout::ColumnSparse { .. } => SparseStructure::ColumnSparse,
            SparseLayout::RowStructured { .. } => SparseStructure::RowStructured,
        }
    }

    /// Stored entries, always `K·U`.
    pub fn nnz(&self) -> usize {
        self.k * self.u
    }

    /// Support of column `u` (the shared row set for row-structured precoders).
    pub fn column_support(&self, u: usize) -> &[usize] {
        match &self.layout {
            SparseLayout::ColumnSparse { supports, .. } => &supports[u],
            SparseLayout::RowStructured { rows, .. } => rows,
        }
    }

    /// Expands to the dense B × U matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.b, self.u);
        match &self.layout {
            SparseLayout::ColumnSparse { supports, values } => {
                for (u, (support, vals)) in supports.iter().zip(values).enumerate() {
                    for (&b, &v) in support.iter().zip(vals) {
                        p[(b, u)] = v;
                    }
                }
            }
            SparseLayout::RowStructured { rows, values } => {
                for (i, &b) in rows.iter().enumerate() {
                    p.row_mut(b).copy_from_slice(values.row(i));
                }
            }
        }
        p
    }

    /// `tr(P̄ᴴP̄)`.
    pub fn power(&self) -> f64 {
        match &self.layout {
            SparseLayout::ColumnSparse { values, .. } => {
                values.iter().flatten().map(Complex64::norm_sqr).sum()
            }
            SparseLayout::RowStructured { values, .. } => values.frobenius_norm_sqr(),
        }
    }
}

fn check_layout(b: usize, layout: &SparseLayout) -> Result<(usize, usize)> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    let check_support = |s: &[usize]| -> Result<()> {
        if s.windows(2).any(|w| w[0] >= w[1]) || s.last().is_some_and(|&l| l >= b) {
            return Err(Error::InvalidParameter(format!(
                "support {s:?} must be strictly increasing within [0, {b})"
            )));
        }
        Ok(())
    };
    match layout {
        SparseLayout::ColumnSparse { supports, values } => {
            let u = supports.len();
            let k = supports.first().map_or(0, Vec::len);
            if u == 0 || k == 0 || k > b {
                return bad(format!(
                    "column-sparse precoder needs U >= 1 and 1 <= K <= B, got U = {u}, K = {k}"
                ));
            }
            if values.len() != u {
                return bad("values and supports differ in column count".into());
            }
            for (s, v) in supports.iter().zip(values) {
                if s.len() != k || v.len() != k {
                    return bad(format!("every column must hold exactly K = {k} entries"));
                }
                check_support(s)?;
            }
            Ok((u, k))
        }
        SparseLayout::RowStructured { rows, values } => {
            let k = rows.len();
            let u = values.cols();
            if u == 0 || k == 0 || k > b || values.rows() != k {
                return bad(format!(
                    "row-structured precoder needs a K x U value block with 1 <= K <= B, got {}x{} for {k} rows",
                    values.rows(),
                    u
                ));
            }
            check_support(rows)?;
            Ok((u, k))
        }
    }
}

/// Precoder families available to the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrecoderKind {
    #[serde(rename = "WF")]
    Wf,
    #[serde(rename = "MRT")]
    Mrt,
    #[serde(rename = "SBP")]
    Sbp,
    #[serde(rename = "RS")]
    Rs,
    #[serde(rename = "1S-SBP")]
    OneShotSbp,
    #[serde(rename = "1S-RS")]
    OneShotRs,
}

impl PrecoderKind {
    pub const ALL: [PrecoderKind; 6] = [
        PrecoderKind::Wf,
        PrecoderKind::Mrt,
        PrecoderKind::Sbp,
        PrecoderKind::Rs,
        PrecoderKind::OneShotSbp,
        PrecoderKind::OneShotRs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrecoderKind::Wf => "WF",
            PrecoderKind::Mrt => "MRT",
            PrecoderKind::Sbp => "SBP",
            PrecoderKind::Rs => "RS",
            PrecoderKind::OneShotSbp => "1S-SBP",
            PrecoderKind::OneShotRs => "1S-RS",
        }
    }

    /// Whether the precoder is built in beamspace with a sparsity level K.
    pub fn is_sparse(self) -> bool {
        !matches!(self, PrecoderKind::Wf | PrecoderKind::Mrt)
    }
}

impl fmt::Display for PrecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PrecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PrecoderKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown precoder {s:?}")))
    }
}

/// Either a dense antenna-domain precoder or a sparse beamspace one.
#[derive(Debug, Clone, PartialEq)]
pub enum Precoder {
    Dense(DensePrecoder),
    Sparse(SparsePrecoder),
}

impl Precoder {
    /// Builds the requested precoder from a channel estimate and its beamspace form.
    ///
    /// `k` is ignored by the dense baselines.
    pub fn build(
        kind: PrecoderKind,
        h: &ComplexMatrix,
        hbar: &BeamspaceChannel,
        kappa: f64,
        k: usize,
        power: PowerConstraint,
    ) -> Result<Self> {
        Ok(match kind {
            PrecoderKind::Wf => Precoder::Dense(DensePrecoder::from_unnormalized(
                &wf(h, kappa)?,
                Domain::Antenna,
                power,
            )?),
            PrecoderKind::Mrt => Precoder::Dense(DensePrecoder::from_unnormalized(
                &mrt(h),
                Domain::Antenna,
                power,
            )?),
            PrecoderKind::Sbp => Precoder::Sparse(sbp(hbar, kappa, k, power)?),
            PrecoderKind::Rs => Precoder::Sparse(rs(hbar, kappa, k, power)?),
            PrecoderKind::OneShotSbp => Precoder::Sparse(one_shot_sbp(hbar, kappa, k, power)?),
            PrecoderKind::OneShotRs => Precoder::Sparse(one_shot_rs(hbar, kappa, k, power)?),
        })
    }

    pub fn beta(&self) -> f64 {
        match self {
            Precoder::Dense(p) => p.beta,
            Precoder::Sparse(p) => p.beta(),
        }
    }

    /// Antenna-domain transmit vector for the symbol vector `s`.
    pub fn apply(&self, s: &[Complex64], plan: &FftPlan) -> Result<Vec<Complex64>> {
        match self {
            Precoder::Dense(p) => apply::apply_dense_with_plan(p, s, Some(plan)),
            Precoder::Sparse(p) => apply_two_stage_with_plan(p, s, plan),
        }
    }

    /// Equivalent dense antenna-domain matrix.
    pub fn antenna_matrix(&self) -> Result<ComplexMatrix> {
        let (p, domain) = match self {
            Precoder::Dense(d) => (d.p.clone(), d.domain),
            Precoder::Sparse(s) => (s.to_dense(), Domain::Beamspace),
        };
        match domain {
            Domain::Antenna => Ok(p),
            Domain::Beamspace => {
                let plan = FftPlan::new(p.rows())?;
                let mut t = p.transpose();
                for r in 0..t.rows() {
                    plan.forward(t.row_mut(r))?;
                }
                Ok(t.transpose())
            }
        }
    }
}
