//! Symmetric Lanczos for one extreme eigenpair of a symmetric operator.
//!
//! Full reorthogonalization (two passes) is used throughout, with explicit
//! restarts from the current Ritz vector once the basis reaches its cap.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::dense::{axpy, dot, norm2, scale};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Largest,
    Smallest,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Relative residual `‖A y − θ y‖ / max|θ|` at which a Ritz pair is accepted.
    pub tol: f64,
    /// Total operator applications allowed.
    pub max_steps: usize,
    /// Basis size after which the iteration restarts.
    pub max_basis: usize,
    /// Also accept the Ritz pair once the Ritz value has moved by less than
    /// this fraction of the spectral spread over eight consecutive checks.
    /// Useful when only the eigenvalue matters and the top of the spectrum
    /// is clustered, where the Ritz vector converges slowly.
    pub stall_tol: Option<f64>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_steps: 10_000,
            max_basis: 160,
            stall_tol: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Relative residual of the returned pair.
    pub residual: f64,
}

/// Deterministic start vector: normalized ones with a fixed pseudo-random
/// perturbation so that no eigenvector is missed by symmetry.
pub fn default_start(n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| 1.0 + 0.5 * rng.random_range(-1.0..1.0)).collect();
    let s = norm2(&v);
    scale(1.0 / s, &mut v);
    v
}

fn ritz(alpha: &[f64], beta: &[f64], which: Extreme) -> (f64, Vec<f64>, f64) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut idx = 0;
    for i in 1..k {
        let better = match which {
            Extreme::Largest => eig.eigenvalues[i] > eig.eigenvalues[idx],
            Extreme::Smallest => eig.eigenvalues[i] < eig.eigenvalues[idx],
        };
        if better {
            idx = i;
        }
    }
    let spread = eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    (
        eig.eigenvalues[idx],
        eig.eigenvectors.column(idx).iter().copied().collect(),
        spread,
    )
}

fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
    for _ in 0..2 {
        for v in basis {
            let h = dot(v, w);
            axpy(-h, v, w);
        }
    }
}

/// Computes the largest or smallest eigenpair of the symmetric operator `op`.
pub fn extreme_eigenpair(
    n: usize,
    op: &dyn Fn(&[f64]) -> Vec<f64>,
    which: Extreme,
    start: Option<&[f64]>,
    opts: &LanczosOptions,
) -> Eigenpair {
    assert!(n > 0);
    let mut v0 = match start {
        Some(s) if norm2(s) > 0.0 => s.to_vec(),
        _ => default_start(n),
    };
    let s0 = norm2(&v0);
    scale(1.0 / s0, &mut v0);
    let cap = opts.max_basis.clamp(2, n.max(2)).min(n);
    let mut total = 0;
    let mut last_theta = f64::NAN;
    let mut stable = 0;
    loop {
        let mut basis: Vec<Vec<f64>> = vec![v0.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(total as u64 + 17);
        loop {
            let j = basis.len() - 1;
            let mut w = op(&basis[j]);
            total += 1;
            let a = dot(&basis[j], &w);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            orthogonalize(&basis, &mut w);
            let b = norm2(&w);
            alpha.push(a);
            let k = alpha.len();
            let check = k <= 60 || k % 4 == 0 || k == cap || total >= opts.max_steps;
            if check {
                let (theta, s, spread) = ritz(&alpha, &beta, which);
                let denom = spread.max(f64::MIN_POSITIVE);
                let res = b * s[k - 1].abs() / denom;
                let exhausted = k == n || b <= 1e-14 * denom;
                if let Some(st) = opts.stall_tol {
                    if (theta - last_theta).abs() <= st * denom {
                        stable += 1;
                    } else {
                        stable = 0;
                    }
                    last_theta = theta;
                }
                let done = res <= opts.tol || exhausted || stable >= 8;
                if done || total >= opts.max_steps || k >= cap {
                    let mut y = vec![0.0; n];
                    for (si, v) in s.iter().zip(&basis) {
                        axpy(*si, v, &mut y);
                    }
                    let ny = norm2(&y);
                    scale(1.0 / ny, &mut y);
                    let pair = Eigenpair {
                        value: theta,
                        vector: y,
                        iterations: total,
                        converged: done,
                        residual: if exhausted { 0.0 } else { res },
                    };
                    if done || total >= opts.max_steps {
                        return pair;
                    }
                    v0 = pair.vector;
                    break;
                }
            }
            if b <= 1e-300 {
                // Invariant subspace found without convergence of the check
                // above; continue with a fresh random direction.
                let mut r: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                orthogonalize(&basis, &mut r);
                let nr = norm2(&r);
                scale(1.0 / nr, &mut r);
                beta.push(0.0);
                basis.push(r);
            } else {
                scale(1.0 / b, &mut w);
                beta.push(b);
                basis.push(w);
            }
        }
    }
}
