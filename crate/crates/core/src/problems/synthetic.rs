//! Dense random systems with prescribed `η`, `C₁` and `C₂`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;
use crate::linalg::sparse::CsrMatrix;
use crate::precond::system::{assemble, SaddlePointSystem, SystemMeta};

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Orthonormal columns from the QR factor of a Gaussian matrix.
fn orthonormal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    gaussian(rng, rows, cols).qr().q()
}

/// `F = I + N` with `‖N‖₂ = eta`, `B = UΣVᵀ` with singular values `C₁`,
/// `C₂` and log-uniform values in between, `H₁ = I`, `H₂ = I`.
/// A seeded standard Gaussian vector.
pub fn random_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

pub fn synthetic(n: usize, m: usize, eta: f64, c1: f64, c2: f64, seed: u64) -> Result<SaddlePointSystem> {
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidParams(format!("need 1 ≤ m ≤ n, got n = {n}, m = {m}")));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParams(format!("eta must be non-negative, got {eta}")));
    }
    if !(c2 > 0.0 && c2 <= c1 && c1.is_finite()) {
        return Err(Error::InvalidParams(format!("need 0 < C2 ≤ C1, got C1 = {c1}, C2 = {c2}")));
    }
    if m == 1 && c1 != c2 {
        return Err(Error::InvalidParams("a single constraint needs C1 = C2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut f = Matrix::identity(n, n);
    if eta > 0.0 && n > 1 {
        let g = gaussian(&mut rng, n, n);
        let skew = &g - g.transpose();
        let scale = eta / skew.singular_values().max();
        f += skew * scale;
    } else if eta > 0.0 {
        return Err(Error::InvalidParams("a 1×1 block has no skew part".into()));
    }

    let mut sigma = vec![c1; m];
    sigma[m - 1] = c2;
    let (l1, l2) = (c1.ln(), c2.ln());
    for s in sigma.iter_mut().take(m - 1).skip(1) {
        *s = (l2 + (l1 - l2) * rng.random::<f64>()).exp();
    }
    let u = orthonormal(&mut rng, m, m);
    let v = orthonormal(&mut rng, n, m);
    let b = u * Matrix::from_diagonal(&nalgebra::DVector::from_vec(sigma)) * v.transpose();

    let rhs: Vec<f64> = (0..n + m).map(|_| StandardNormal.sample(&mut rng)).collect();
    let meta = SystemMeta::new("synthetic", 1.0, None)
        .with_param("eta", eta)
        .with_param("c1", c1)
        .with_param("c2", c2)
        .with_param("seed", seed as f64);
    assemble(&CsrMatrix::from_dense(&f), &CsrMatrix::from_dense(&b), &CsrMatrix::identity(m), meta)?.with_rhs(rhs)
}
