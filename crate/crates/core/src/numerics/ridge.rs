//! Regularized least squares through a Cholesky factorization of the Gram matrix.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// A pivot is rejected when it falls below this fraction of the largest diagonal entry.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Lower-triangular Cholesky factor `L` of a Hermitian positive definite matrix `G = L Lᴴ`.
///
/// The factor can be grown one row at a time with [`Cholesky::push`], which
/// is what greedy support selection needs when it appends a column to `A`.
#[derive(Debug, Clone, Default)]
pub struct Cholesky {
    /// Packed rows of the lower triangle, row `i` holding `i + 1` entries.
    l: Vec<Complex64>,
    n: usize,
    max_diag: f64,
}

impl Cholesky {
    pub fn factor(g: &ComplexMatrix) -> Result<Self> {
        let n = g.rows();
        if g.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Cholesky of a {}x{} matrix",
                g.rows(),
                g.cols()
            )));
        }
        let mut chol = Self {
            l: Vec::with_capacity(n * (n + 1) / 2),
            n: 0,
            max_diag: (0..n).map(|i| g[(i, i)].re).fold(0.0, f64::max),
        };
        for j in 0..n {
            chol.push(&g.row(j)[..=j])?;
        }
        Ok(chol)
    }

    /// Borders the factored matrix with one more row and column.
    ///
    /// `row` holds `G[n, 0..=n]`: the new off-diagonal entries followed by the new diagonal.
    pub fn push(&mut self, row: &[Complex64]) -> Result<()> {
        let j = self.n;
        if row.len() != j + 1 {
            return Err(Error::DimensionMismatch(format!(
                "bordering row has {} entries, expected {}",
                row.len(),
                j + 1
            )));
        }
        self.max_diag = self.max_diag.max(row[j].re);
        let threshold = SINGULAR_PIVOT_RATIO * self.max_diag;
        let base = self.l.len();
        for k in 0..j {
            let lk = &self.l[k * (k + 1) / 2..(k + 1) * (k + 2) / 2];
            let mut s = row[k];
            for m in 0..k {
                s -= self.l[base + m] * lk[m].conj();
            }
            self.l.push(s / lk[k].re);
        }
        let d = row[j].re - self.l[base..].iter().map(Complex64::norm_sqr).sum::<f64>();
        // negated comparison also rejects NaN pivots
        if !(d > threshold) {
            self.l.truncate(base);
            return Err(Error::SingularSystem {
                index: j,
                pivot: d,
                threshold,
            });
        }
        self.l.push(Complex64::new(d.sqrt(), 0.0));
        self.n += 1;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, i: usize, k: usize) -> Complex64 {
        self.l[i * (i + 1) / 2 + k]
    }

    pub fn factor_l(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |i, k| {
            if k <= i {
                self.at(i, k)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Solves `G X = rhs` column by column.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim();
        if rhs.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, system has {n}",
                rhs.rows()
            )));
        }
        let mut x = rhs.clone();
        let cols = rhs.cols();
        // forward: L z = rhs
        for i in 0..n {
            for c in 0..cols {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.at(i, k) * x[(k, c)];
                }
                x[(i, c)] = s / self.at(i, i).re;
            }
        }
        // backward: Lᴴ x = z
        for i in (0..n).rev() {
            for c in 0..cols {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.at(k, i).conj() * x[(k, c)];
                }
                x[(i, c)] = s / self.at(i, i).re;
            }
        }
        Ok(x)
    }
}

/// Adds `kappa` to the diagonal of a square matrix in place.
pub fn add_diagonal(g: &mut ComplexMatrix, kappa: f64) {
    for i in 0..g.rows().min(g.cols()) {
        g[(i, i)] += kappa;
    }
}

/// Minimizes `‖A X − B‖_F² + κ‖X‖_F²`, returning `X = (AᴴA + κI)⁻¹ Aᴴ B`.
pub fn ridge_ls(a: &ComplexMatrix, b: &ComplexMatrix, kappa: f64) -> Result<ComplexMatrix> {
    if !(kappa >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "kappa must be nonnegative, got {kappa}"
        )));
    }
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "A has {} rows, B has {}",
            a.rows(),
            b.rows()
        )));
    }
    let mut gram = a.adjoint_matmul(a)?;
    add_diagonal(&mut gram, kappa);
    let rhs = a.adjoint_matmul(b)?;
    Cholesky::factor(&gram)?.solve(&rhs)
}
