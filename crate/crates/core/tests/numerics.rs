mod common;

use beamspace::numerics::{dft_matrix, fft, ifft, norm, ridge_ls, ComplexMatrix};
use common::*;
use proptest::prelude::*;

#[test]
fn ridge_matches_gradient_descent_oracle() {
    let mut r = rng(2024);
    let a = random_matrix(4, 2, &mut r);
    let b = ComplexMatrix::identity(4).select_cols(&[0, 1]);
    let x = ridge_ls(&a, &b, 0.5).unwrap();
    let oracle = ridge_by_gradient_descent(&a, &b, 0.5, 20_000);
    assert!(
        x.max_abs_diff(&oracle) < 1e-6,
        "diff {}",
        x.max_abs_diff(&oracle)
    );
}

#[test]
fn dft_is_unitary() {
    let f = dft_matrix(8);
    let fhf = naive_matmul(&naive_adjoint(&f), &f);
    assert!(fhf.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
}

#[test]
fn fft_matches_dense_dft() {
    let mut r = rng(7);
    let v = random_vector(128, &mut r);
    let dense = naive_matmul(
        &dft_matrix(128),
        &ComplexMatrix::from_vec(128, 1, v.clone()).unwrap(),
    );
    let fast = ComplexMatrix::from_vec(128, 1, fft(&v).unwrap()).unwrap();
    assert!(fast.relative_diff(&dense) < 1e-10);

    let dense_inv = naive_matmul(
        &naive_adjoint(&dft_matrix(128)),
        &ComplexMatrix::from_vec(128, 1, v.clone()).unwrap(),
    );
    let fast_inv = ComplexMatrix::from_vec(128, 1, ifft(&v).unwrap()).unwrap();
    assert!(fast_inv.relative_diff(&dense_inv) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ridge_satisfies_normal_equations(m in 2usize..12, k in 1usize..6, c in 1usize..5,
                                        kappa in 0.01f64..3.0, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_matrix(m, k, &mut r);
        let b = random_matrix(m, c, &mut r);
        let x = ridge_ls(&a, &b, kappa).unwrap();
        let a_h = naive_adjoint(&a);
        let mut g = naive_matmul(&a_h, &a);
        for i in 0..k {
            g[(i, i)] += kappa;
        }
        let lhs = naive_matmul(&g, &x);
        let rhs = naive_matmul(&a_h, &b);
        prop_assert!(lhs.relative_diff(&rhs) <= 1e-10);
        prop_assert!(x.is_finite());
    }

    #[test]
    fn fft_unitary_and_invertible(log_n in 0u32..9, seed in any::<u64>()) {
        let mut r = rng(seed);
        let v = random_vector(1 << log_n, &mut r);
        let f = fft(&v).unwrap();
        prop_assert!((norm(&f) - norm(&v)).abs() <= 1e-10 * norm(&v));
        let back = ifft(&f).unwrap();
        let err = back.iter().zip(&v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-10 * norm(&v));
    }
}
