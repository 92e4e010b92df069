use num_complex::Complex64;

use super::{DensePrecoder, Domain, SparseLayout, SparsePrecoder};
use crate::error::{Error, Result};
use crate::numerics::FftPlan;

/// Two-stage precoding `x = F_B (P̄ s)` using only the stored nonzeros of `P̄`.
///
/// With `H̄ = H F_B` and `F_B` symmetric, `H x = H̄ P̄ s`: the FFT maps the
/// beamspace vector back onto the array.
pub fn apply_two_stage(p: &SparsePrecoder, s: &[Complex64]) -> Result<Vec<Complex64>> {
    apply_two_stage_with_plan(p, s, &FftPlan::new(p.b())?)
}

/// [`apply_two_stage`] with a caller-held FFT plan of length B.
pub fn apply_two_stage_with_plan(
    p: &SparsePrecoder,
    s: &[Complex64],
    plan: &FftPlan,
) -> Result<Vec<Complex64>> {
    if s.len() != p.u() {
        return Err(Error::DimensionMismatch(format!(
            "symbol vector of length {} for U = {}",
            s.len(),
            p.u()
        )));
    }
    if plan.len() != p.b() {
        return Err(Error::DimensionMismatch(format!(
            "FFT plan of length {} for B = {}",
            plan.len(),
            p.b()
        )));
    }
    let mut x = vec![Complex64::new(0.0, 0.0); p.b()];
    match p.layout() {
        SparseLayout::ColumnSparse { supports, values } => {
            for ((support, vals), &su) in supports.iter().zip(values).zip(s) {
                for (&b, &v) in support.iter().zip(vals) {
                    x[b] += v * su;
                }
            }
        }
        SparseLayout::RowStructured { rows, values } => {
            for (i, &b) in rows.iter().enumerate() {
                x[b] = values.row(i).iter().zip(s).map(|(v, su)| v * su).sum();
            }
        }
    }
    plan.forward(&mut x)?;
    Ok(x)
}

/// Dense precoding `x = P s`, followed by `F_B` when `P` lives in beamspace.
pub fn apply_dense(p: &DensePrecoder, s: &[Complex64]) -> Result<Vec<Complex64>> {
    apply_dense_with_plan(p, s, None)
}

pub(crate) fn apply_dense_with_plan(
    p: &DensePrecoder,
    s: &[Complex64],
    plan: Option<&FftPlan>,
) -> Result<Vec<Complex64>> {
    let mut x = p.p.matvec(s)?;
    if p.domain == Domain::Beamspace {
        match plan {
            Some(plan) => plan.forward(&mut x)?,
            None => FftPlan::new(x.len())?.forward(&mut x)?,
        }
    }
    Ok(x)
}
