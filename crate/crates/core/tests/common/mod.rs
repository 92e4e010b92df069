#![allow(dead_code)]

use beamspace::numerics::{complex_gaussian, ComplexMatrix};
use beamspace::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, 1.0))
}

pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng, 1.0)).collect()
}

/// Plain triple-loop product on raw entries.
pub fn naive_matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.cols(), b.rows());
    let mut out = ComplexMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..a.cols() {
                s += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

pub fn naive_adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out[(j, i)] = a[(i, j)].conj();
        }
    }
    out
}

/// Gradient descent on `‖A X − B‖_F² + κ‖X‖_F²`, independent of any factorization.
pub fn ridge_by_gradient_descent(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    kappa: f64,
    iters: usize,
) -> ComplexMatrix {
    let a_h = naive_adjoint(a);
    // Lipschitz bound of the Wirtinger gradient
    let lip = a.frobenius_norm_sqr() + kappa;
    let step = 1.0 / lip;
    let mut x = ComplexMatrix::zeros(a.cols(), b.cols());
    for _ in 0..iters {
        let resid = naive_matmul(a, &x).sub(b).unwrap();
        let grad = naive_matmul(&a_h, &resid);
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let g = grad[(i, j)] + kappa * x[(i, j)];
                x[(i, j)] -= step * g;
            }
        }
    }
    x
}

/// Solves a small dense linear system by Gauss-Jordan elimination with partial pivoting.
pub fn gauss_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let m = b.cols();
    let mut aug: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a[(i, j)])
                .chain((0..m).map(|j| b[(i, j)]))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| aug[x][col].norm().total_cmp(&aug[y][col].norm()))
            .unwrap();
        aug.swap(col, piv);
        let p = aug[col][col];
        for v in aug[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = aug[r][col];
                let pivot_row = aug[col].clone();
                for (v, pv) in aug[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    ComplexMatrix::from_fn(n, m, |i, j| aug[i][n + j])
}

/// `(AᴴA + κI)⁻¹ Aᴴ B` through Gauss-Jordan on the normal equations.
pub fn reference_ridge(a: &ComplexMatrix, b: &ComplexMatrix, kappa: f64) -> ComplexMatrix {
    let a_h = naive_adjoint(a);
    let mut g = naive_matmul(&a_h, a);
    for i in 0..g.rows() {
        g[(i, i)] += kappa;
    }
    gauss_solve(&g, &naive_matmul(&a_h, b))
}
