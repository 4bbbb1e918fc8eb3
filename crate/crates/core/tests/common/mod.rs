//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use fovk::linalg::Matrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// `GᵀG + I`
pub fn random_spd(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let g = random_matrix(rng, n, n);
    g.transpose() * &g + Matrix::identity(n, n)
}

/// Singular values by one-sided Jacobi rotations, sorted descending.
pub fn jacobi_singular_values(m: &Matrix) -> Vec<f64> {
    let mut a: Vec<Vec<f64>> = (0..m.ncols()).map(|j| m.column(j).iter().copied().collect()).collect();
    let n = a.len();
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = a[p].iter().map(|x| x * x).sum();
                let beta: f64 = a[q].iter().map(|x| x * x).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                off = off.max(gamma.abs() / (alpha * beta).sqrt());
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..a[p].len() {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Cholesky factor `L` with `H = L Lᵀ`, by the textbook recurrence.
pub fn cholesky(h: &Matrix) -> Matrix {
    let n = h.nrows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d: f64 = h[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        l[(j, j)] = d.sqrt();
        for i in j + 1..n {
            let s: f64 = h[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = s / l[(j, j)];
        }
    }
    l
}

/// Textbook GMRES in the Euclidean norm from `x0 = 0`: modified Gram–Schmidt
/// Arnoldi, and each iterate from a fresh SVD least-squares solve of the
/// Hessenberg system.
pub fn textbook_gmres(a: &Matrix, b: &[f64], steps: usize) -> Vec<Vec<f64>> {
    let n = b.len();
    let beta = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut v: Vec<Vec<f64>> = vec![b.iter().map(|x| x / beta).collect()];
    let mut h = Matrix::zeros(steps + 1, steps);
    let mut iterates = Vec::new();
    for k in 0..steps {
        let mut w: Vec<f64> = (a * nalgebra::DVector::from_column_slice(&v[k])).iter().copied().collect();
        for (i, vi) in v.iter().enumerate() {
            let hij: f64 = w.iter().zip(vi).map(|(x, y)| x * y).sum();
            h[(i, k)] = hij;
            w.iter_mut().zip(vi).for_each(|(x, y)| *x -= hij * y);
        }
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        h[(k + 1, k)] = nw;
        let hk = h.view((0, 0), (k + 2, k + 1)).clone_owned();
        let mut rhs = nalgebra::DVector::zeros(k + 2);
        rhs[0] = beta;
        let y = hk.svd(true, true).solve(&rhs, 1e-14).unwrap();
        let mut x = vec![0.0; n];
        for (j, yj) in y.iter().enumerate() {
            x.iter_mut().zip(&v[j]).for_each(|(xi, vj)| *xi += yj * vj);
        }
        iterates.push(x);
        if nw < 1e-14 {
            break;
        }
        v.push(w.iter().map(|x| x / nw).collect());
    }
    iterates
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let s: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    d / s.max(f64::MIN_POSITIVE)
}
