use crate::error::Result;
use crate::numerics::{add_diagonal, Cholesky, ComplexMatrix};

/// Unnormalized Wiener filter `Q = (HᴴH + κI_B)⁻¹Hᴴ`.
///
/// Evaluated through the equivalent U × U form `Hᴴ(HHᴴ + κI_U)⁻¹`. Works
/// unchanged on a beamspace channel, giving the beamspace WF matrix.
pub fn wf(h: &ComplexMatrix, kappa: f64) -> Result<ComplexMatrix> {
    if !(kappa >= 0.0) {
        return Err(crate::Error::InvalidParameter(format!(
            "kappa must be nonnegative, got {kappa}"
        )));
    }
    let h_adj = h.adjoint();
    let mut gram = h.matmul(&h_adj)?;
    add_diagonal(&mut gram, kappa);
    let inv = Cholesky::factor(&gram)?.solve(&ComplexMatrix::identity(h.rows()))?;
    h_adj.matmul(&inv)
}

/// Unnormalized maximum ratio transmission `Q = Hᴴ`.
pub fn mrt(h: &ComplexMatrix) -> ComplexMatrix {
    h.adjoint()
}
