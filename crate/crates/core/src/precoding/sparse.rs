//! Greedy sparse beamspace precoders.
//!
//! SBP runs orthogonal matching pursuit independently on every column of the
//! beamspace precoder, RS runs a multiple-measurement-vector OMP that shares
//! one row support across all columns, and the one-shot variants pick the
//! whole support from the first-iteration selection metric.
//!
//! Argmax ties go to the lowest beam index. Supports are stored in increasing
//! order; the traces keep the selection order.

use num_complex::Complex64;

use super::{PowerConstraint, SparseLayout, SparsePrecoder};
use crate::channel::BeamspaceChannel;
use crate::error::{Error, Result};
use crate::numerics::{ridge_ls, Cholesky, ComplexMatrix};

/// Per-column OMP result before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct OmpColumnTrace {
    pub user: usize,
    /// Beam indices in the order they were selected.
    pub order: Vec<usize>,
    /// Final coefficients aligned with `order`.
    pub coefficients: Vec<Complex64>,
    /// `‖H̄q̄⁽ᵏ⁾ − e_u‖² + κ‖q̄⁽ᵏ⁾‖²` after each iteration.
    pub objectives: Vec<f64>,
}

/// Shared-support OMP result before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct MmvTrace {
    pub order: Vec<usize>,
    /// K × U coefficients, row `i` belongs to `order[i]`.
    pub coefficients: ComplexMatrix,
    /// `‖I − H̄_Ω Q̄⁽ᵏ⁾‖_F² + κ‖Q̄⁽ᵏ⁾‖_F²` after each iteration.
    pub objectives: Vec<f64>,
}

fn check_args(hbar: &BeamspaceChannel, kappa: f64, k: usize) -> Result<()> {
    if k == 0 || k > hbar.b() {
        return Err(Error::InvalidParameter(format!(
            "sparsity K = {k} must satisfy 1 <= K <= B = {}",
            hbar.b()
        )));
    }
    if !(kappa >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be nonnegative, got {kappa}"
        )));
    }
    Ok(())
}

fn unit_column(u: usize, n: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(n, 1);
    e[(u, 0)] = Complex64::new(1.0, 0.0);
    e
}

/// Incrementally grown ridge system `(A_Ωᴴ A_Ω + κI) X = A_Ωᴴ T` for greedy OMP.
///
/// Columns of `A = H̄` are read as conjugated rows of `H̄ᴴ`.
struct GreedyRidge<'a> {
    h_adj: &'a ComplexMatrix,
    kappa: f64,
    chol: Cholesky,
    order: Vec<usize>,
}

impl<'a> GreedyRidge<'a> {
    fn new(h_adj: &'a ComplexMatrix, kappa: f64, k: usize) -> Self {
        Self {
            h_adj,
            kappa,
            chol: Cholesky::default(),
            order: Vec::with_capacity(k),
        }
    }

    fn add(&mut self, b: usize) -> Result<()> {
        let new = self.h_adj.row(b);
        let mut row: Vec<Complex64> = self
            .order
            .iter()
            .map(|&j| {
                new.iter()
                    .zip(self.h_adj.row(j))
                    .map(|(x, y)| x * y.conj())
                    .sum()
            })
            .collect();
        row.push(Complex64::new(
            new.iter().map(Complex64::norm_sqr).sum::<f64>() + self.kappa,
            0.0,
        ));
        self.chol.push(&row)?;
        self.order.push(b);
        Ok(())
    }

    /// Coefficients for the target `I_U` restricted to `cols`, plus residual and objective.
    fn solve(&self, cols: &[usize]) -> Result<(ComplexMatrix, ComplexMatrix, f64)> {
        let u = self.h_adj.cols();
        // A_Ωᴴ e_c is entry c of row Ω of H̄ᴴ
        let rhs = ComplexMatrix::from_fn(self.order.len(), cols.len(), |i, c| {
            self.h_adj[(self.order[i], cols[c])]
        });
        let x = self.chol.solve(&rhs)?;
        let mut r = ComplexMatrix::from_fn(u, cols.len(), |i, c| {
            if i == cols[c] {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        for (k, &b) in self.order.iter().enumerate() {
            let a = self.h_adj.row(b);
            for i in 0..u {
                let ai = a[i].conj();
                for c in 0..cols.len() {
                    r[(i, c)] -= ai * x[(k, c)];
                }
            }
        }
        let obj = r.frobenius_norm_sqr() + self.kappa * x.frobenius_norm_sqr();
        Ok((x, r, obj))
    }
}

/// Index of the largest score among unselected entries, lowest index on ties.
fn argmax_available(scores: impl Iterator<Item = f64>, taken: &[bool]) -> usize {
    let mut best = None;
    let mut best_score = f64::NEG_INFINITY;
    for (b, s) in scores.enumerate() {
        if taken[b] {
            continue;
        }
        if best.is_none() || s > best_score {
            best = Some(b);
            best_score = s;
        }
    }
    best.expect("at least one beam left to select")
}

/// Runs K OMP iterations for column `u` of the beamspace precoder.
pub fn omp_column(
    hbar: &BeamspaceChannel,
    u: usize,
    kappa: f64,
    k: usize,
) -> Result<OmpColumnTrace> {
    check_args(hbar, kappa, k)?;
    let h_adj = hbar.matrix().adjoint();
    omp_column_adj(&h_adj, u, kappa, k)
}

fn omp_column_adj(h_adj: &ComplexMatrix, u: usize, kappa: f64, k: usize) -> Result<OmpColumnTrace> {
    if u >= h_adj.cols() {
        return Err(Error::InvalidParameter(format!(
            "user {u} out of range for U = {}",
            h_adj.cols()
        )));
    }
    let mut ridge = GreedyRidge::new(h_adj, kappa, k);
    let mut taken = vec![false; h_adj.rows()];
    let mut objectives = Vec::with_capacity(k);
    let mut r = vec![Complex64::new(0.0, 0.0); h_adj.cols()];
    r[u] = Complex64::new(1.0, 0.0);
    let mut coeffs = ComplexMatrix::zeros(0, 1);
    for _ in 0..k {
        let scores = (0..h_adj.rows()).map(|b| {
            h_adj
                .row(b)
                .iter()
                .zip(&r)
                .map(|(a, x)| a * x)
                .sum::<Complex64>()
                .norm_sqr()
        });
        let b = argmax_available(scores, &taken);
        taken[b] = true;
        ridge.add(b)?;
        let (x, res, obj) = ridge.solve(&[u])?;
        coeffs = x;
        r = res.as_slice().to_vec();
        objectives.push(obj);
    }
    Ok(OmpColumnTrace {
        user: u,
        order: ridge.order,
        coefficients: coeffs.as_slice().to_vec(),
        objectives,
    })
}

/// Runs K iterations of shared-support OMP against `I_U`.
pub fn mmv_omp(hbar: &BeamspaceChannel, kappa: f64, k: usize) -> Result<MmvTrace> {
    check_args(hbar, kappa, k)?;
    let h_adj = hbar.matrix().adjoint();
    let users: Vec<usize> = (0..hbar.u()).collect();
    let mut ridge = GreedyRidge::new(&h_adj, kappa, k);
    let mut taken = vec![false; hbar.b()];
    let mut objectives = Vec::with_capacity(k);
    let mut r = ComplexMatrix::identity(hbar.u());
    let mut coeffs = ComplexMatrix::zeros(0, hbar.u());
    for _ in 0..k {
        let corr = h_adj.matmul(&r)?;
        let scores =
            (0..hbar.b()).map(|b| corr.row(b).iter().map(Complex64::norm_sqr).sum::<f64>());
        let b = argmax_available(scores, &taken);
        taken[b] = true;
        ridge.add(b)?;
        let (x, res, obj) = ridge.solve(&users)?;
        coeffs = x;
        r = res;
        objectives.push(obj);
    }
    Ok(MmvTrace {
        order: ridge.order,
        coefficients: coeffs,
        objectives,
    })
}

/// Indices of the `k` largest scores, ties to the lowest index, returned in increasing order.
pub fn top_k_indices(scores: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    // stable sort keeps lower indices first among equal scores
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

fn sorted_column(order: &[usize], coeffs: &[Complex64]) -> (Vec<usize>, Vec<Complex64>) {
    let mut pairs: Vec<(usize, Complex64)> =
        order.iter().copied().zip(coeffs.iter().copied()).collect();
    pairs.sort_by_key(|p| p.0);
    pairs.into_iter().unzip()
}

fn sorted_rows(order: &[usize], coeffs: &ComplexMatrix) -> (Vec<usize>, ComplexMatrix) {
    let mut perm: Vec<usize> = (0..order.len()).collect();
    perm.sort_by_key(|&i| order[i]);
    let rows = perm.iter().map(|&i| order[i]).collect();
    let values = ComplexMatrix::from_fn(order.len(), coeffs.cols(), |r, c| coeffs[(perm[r], c)]);
    (rows, values)
}

/// Sparse beamspace precoder: per-column OMP with exactly K nonzeros per column.
pub fn sbp(
    hbar: &BeamspaceChannel,
    kappa: f64,
    k: usize,
    power: PowerConstraint,
) -> Result<SparsePrecoder> {
    check_args(hbar, kappa, k)?;
    let mut supports = Vec::with_capacity(hbar.u());
    let mut values = Vec::with_capacity(hbar.u());
    let h_adj = hbar.matrix().adjoint();
    for u in 0..hbar.u() {
        let trace = omp_column_adj(&h_adj, u, kappa, k)?;
        let (s, v) = sorted_column(&trace.order, &trace.coefficients);
        supports.push(s);
        values.push(v);
    }
    SparsePrecoder::from_unnormalized(
        hbar.b(),
        SparseLayout::ColumnSparse { supports, values },
        power,
    )
}

/// Row-select precoder: K shared nonzero rows chosen by MMV-OMP.
pub fn rs(
    hbar: &BeamspaceChannel,
    kappa: f64,
    k: usize,
    power: PowerConstraint,
) -> Result<SparsePrecoder> {
    let trace = mmv_omp(hbar, kappa, k)?;
    let (rows, values) = sorted_rows(&trace.order, &trace.coefficients);
    SparsePrecoder::from_unnormalized(
        hbar.b(),
        SparseLayout::RowStructured { rows, values },
        power,
    )
}

/// One-shot SBP: column u keeps the K strongest entries of row u of `H̄`.
pub fn one_shot_sbp(
    hbar: &BeamspaceChannel,
    kappa: f64,
    k: usize,
    power: PowerConstraint,
) -> Result<SparsePrecoder> {
    check_args(hbar, kappa, k)?;
    let h = hbar.matrix();
    let mut supports = Vec::with_capacity(hbar.u());
    let mut values = Vec::with_capacity(hbar.u());
    for u in 0..hbar.u() {
        let scores: Vec<f64> = h.row(u).iter().map(Complex64::norm_sqr).collect();
        let support = top_k_indices(&scores, k);
        let q = ridge_ls(&h.select_cols(&support), &unit_column(u, h.rows()), kappa)?;
        supports.push(support);
        values.push(q.as_slice().to_vec());
    }
    SparsePrecoder::from_unnormalized(
        hbar.b(),
        SparseLayout::ColumnSparse { supports, values },
        power,
    )
}

/// One-shot RS: the K beams with the largest column norms of `H̄`.
pub fn one_shot_rs(
    hbar: &BeamspaceChannel,
    kappa: f64,
    k: usize,
    power: PowerConstraint,
) -> Result<SparsePrecoder> {
    check_args(hbar, kappa, k)?;
    let h = hbar.matrix();
    let scores: Vec<f64> = (0..h.cols()).map(|b| h.col_norm(b).powi(2)).collect();
    let rows = top_k_indices(&scores, k);
    let values = ridge_ls(
        &h.select_cols(&rows),
        &ComplexMatrix::identity(h.rows()),
        kappa,
    )?;
    SparsePrecoder::from_unnormalized(
        hbar.b(),
        SparseLayout::RowStructured { rows, values },
        power,
    )
}
