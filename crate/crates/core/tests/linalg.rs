mod common;

use common::*;
use fovk::linalg::{factor_spd, inv_norm, op_norm, weighted_inner, Matrix, NormOptions, WeightedSpace};
use proptest::prelude::*;

fn weighted_matrix(space: &WeightedSpace, m: &Matrix, from: &WeightedSpace) -> Matrix {
    // T_to M T_from⁻¹ assembled column by column
    let n = from.dim();
    let mut out = Matrix::zeros(space.dim(), n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = space.transform(&fovk::linalg::dense::matvec(m, &from.inv_transform(&e)));
        out.column_mut(j).copy_from_slice(&col);
    }
    out
}

#[test]
fn factor_reconstructs_random_spd() {
    let mut r = rng(1);
    for n in [1, 5, 30] {
        let h = random_spd(&mut r, n);
        let s = factor_spd(&h).unwrap();
        let back = s.matrix();
        assert!((&back - &h).norm() <= 1e-12 * h.norm());
        let t = s.transform_matrix();
        assert!((t.transpose() * &t - &h).norm() <= 1e-12 * h.norm());
    }
}

#[test]
fn diagonal_factor() {
    let s = factor_spd(&Matrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0])).unwrap();
    let t = s.transform_matrix();
    assert!((t - Matrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).norm() < 1e-15);
}

#[test]
fn factor_agrees_with_textbook_cholesky() {
    let mut r = rng(2);
    let h = random_spd(&mut r, 12);
    let l = cholesky(&h);
    let s = factor_spd(&h).unwrap();
    let x = random_vector(&mut r, 12);
    let lt_x = l.transpose() * nalgebra::DVector::from_column_slice(&x);
    assert!((s.norm(&x) - lt_x.norm()).abs() <= 1e-10 * s.norm(&x));
}

#[test]
fn weighted_norms_match_jacobi_svd() {
    let mut r = rng(3);
    for (rows, cols) in [(6, 6), (9, 4), (3, 8)] {
        let m = random_matrix(&mut r, rows, cols);
        let from = factor_spd(&random_spd(&mut r, cols)).unwrap();
        let to = factor_spd(&random_spd(&mut r, rows)).unwrap();
        let est = op_norm(&m, &from, &to, NormOptions::default()).unwrap();
        let sv = jacobi_singular_values(&weighted_matrix(&to, &m, &from));
        assert!(est.converged);
        assert!((est.value - sv[0]).abs() <= 1e-8 * sv[0], "{} vs {}", est.value, sv[0]);
        for inv in [false, true] {
            let (f, t) = if inv { (from.inverse(), to.inverse()) } else { (from.clone(), to.clone()) };
            let sv = jacobi_singular_values(&weighted_matrix(&t, &m, &f));
            let est = op_norm(&m, &f, &t, NormOptions::default()).unwrap();
            assert!((est.value - sv[0]).abs() <= 1e-8 * sv[0]);
        }
    }
}

#[test]
fn inverse_norm_matches_smallest_singular_value() {
    let mut r = rng(4);
    let m = random_matrix(&mut r, 10, 10) + Matrix::identity(10, 10) * 3.0;
    let h = factor_spd(&random_spd(&mut r, 10)).unwrap();
    let sv = jacobi_singular_values(&weighted_matrix(&h, &m, &h));
    let est = inv_norm(&m, &h, &h, NormOptions::default()).unwrap();
    assert!((est.value - 1.0 / sv[9]).abs() <= 1e-8 * est.value);
}

#[test]
fn jacobi_oracle_on_diagonal() {
    let sv = jacobi_singular_values(&Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -3.0, 2.0])));
    assert_eq!(sv, vec![3.0, 2.0, 1.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn h_norm_is_transform_norm(seed in 0u64..1000, n in 1usize..12) {
        let mut r = rng(seed);
        let s = factor_spd(&random_spd(&mut r, n)).unwrap();
        let v = random_vector(&mut r, n);
        let via_t: f64 = s.transform(&v).iter().map(|x| x * x).sum::<f64>().sqrt();
        let via_h = weighted_inner(&v, &v, &s).unwrap().sqrt();
        prop_assert!((via_t - via_h).abs() <= 1e-10 * via_h.max(1e-300));
    }

    #[test]
    fn inner_product_is_symmetric_and_bilinear(seed in 0u64..1000, n in 1usize..10, alpha in -3.0f64..3.0) {
        let mut r = rng(seed);
        let s = factor_spd(&random_spd(&mut r, n)).unwrap();
        let (u, v, w) = (random_vector(&mut r, n), random_vector(&mut r, n), random_vector(&mut r, n));
        let uv = weighted_inner(&u, &v, &s).unwrap();
        prop_assert!((uv - weighted_inner(&v, &u, &s).unwrap()).abs() <= 1e-10 * (1.0 + uv.abs()));
        let comb: Vec<f64> = u.iter().zip(&w).map(|(a, b)| alpha * a + b).collect();
        let lhs = weighted_inner(&comb, &v, &s).unwrap();
        let rhs = alpha * uv + weighted_inner(&w, &v, &s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn norm_is_submultiplicative_and_homogeneous(seed in 0u64..1000, n in 2usize..8, alpha in 0.1f64..10.0) {
        let mut r = rng(seed);
        let h = factor_spd(&random_spd(&mut r, n)).unwrap();
        let (a, b) = (random_matrix(&mut r, n, n), random_matrix(&mut r, n, n));
        let o = NormOptions::default();
        let na = op_norm(&a, &h, &h, o).unwrap().value;
        let nb = op_norm(&b, &h, &h, o).unwrap().value;
        let nab = op_norm(&(&a * &b), &h, &h, o).unwrap().value;
        prop_assert!(nab <= na * nb * (1.0 + 1e-8));
        let nsa = op_norm(&(&a * alpha), &h, &h, o).unwrap().value;
        prop_assert!((nsa - alpha * na).abs() <= 1e-8 * nsa);
    }
}
