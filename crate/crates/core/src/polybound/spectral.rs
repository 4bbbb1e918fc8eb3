//! The eigenvector bound `κ_H(V) · min_p max_k |p(λ_k)|`.
//!
//! `V` is the computed eigenvector matrix with columns normalized in the
//! H-norm. Its condition number bounds the best-conditioned choice from
//! above, so the curve is an upper estimate of the sharp eigenvector bound.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dense::Matrix, space::WeightedSpace};
use crate::polybound::curve::{en_values, BoundCurve};
use crate::polybound::lawson::Region;

/// Eigenvector condition numbers beyond this are reported as near defective.
pub const DEFECTIVE_CONDITION: f64 = 1e12;
/// Eigenvalues closer than this (relative to the matrix scale) are treated
/// as one eigenvalue.
const CLUSTER_TOL: f64 = 1e-10;
/// Largest accepted eigenpair residual relative to the matrix scale.
const RESIDUAL_TOL: f64 = 1e-8;
/// Relative deflation threshold of the Schur iteration.
const SCHUR_TOL: f64 = 1e-13;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// `T V` with unit columns, `T` the transform of the space.
    pub vectors: DMatrix<Complex64>,
    /// `κ_H(V)`
    pub condition: f64,
}

/// Eigenvalues and H-normalized eigenvectors via the complex Schur form.
pub fn eigen_decomposition(a: &Matrix, space: &WeightedSpace) -> Result<EigenDecomposition> {
    let n = a.nrows();
    if a.ncols() != n || space.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if a.ncols() != n { a.ncols() } else { space.dim() },
        });
    }
    let at = space.similarity(a).map(|x| Complex64::new(x, 0.0));
    let scale = at.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    let schur = Schur::try_new(at.clone(), SCHUR_TOL, 1_000_000).ok_or_else(|| Error::EigFailure("complex Schur form did not converge".into()))?;
    let (q, t) = schur.unpack();
    let values: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    let cluster = CLUSTER_TOL * scale;

    // Eigenvectors of the triangular factor by back substitution. Within a
    // cluster of equal eigenvalues the coupling is dropped; for a semisimple
    // eigenvalue it is rounding noise, and a defective one shows up in the
    // residual check below.
    let cols: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let lam = t[(k, k)];
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            y[k] = Complex64::new(1.0, 0.0);
            for i in (0..k).rev() {
                let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
                let d = t[(i, i)] - lam;
                if d.norm() > cluster {
                    y[i] = -s / d;
                }
            }
            y
        })
        .collect();
    let y = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    let mut v = q * y;
    for mut c in v.column_iter_mut() {
        let nrm = c.norm();
        c /= Complex64::new(nrm, 0.0);
    }
    let resid = (0..n)
        .map(|k| (&at * v.column(k) - v.column(k) * values[k]).norm())
        .fold(0.0f64, f64::max);
    if resid > RESIDUAL_TOL * scale {
        return Err(Error::NearDefective { condition: f64::INFINITY });
    }
    let sv = v.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    Ok(EigenDecomposition {
        values,
        vectors: v,
        condition,
    })
}

/// `κ_H(V) · E_n(σ(A))` at each degree.
pub fn spectral_bound(a: &Matrix, space: &WeightedSpace, degrees: &[usize]) -> Result<BoundCurve> {
    let eig = eigen_decomposition(a, space)?;
    if !(eig.condition <= DEFECTIVE_CONDITION) {
        return Err(Error::NearDefective { condition: eig.condition });
    }
    let region = Region::from_points(eig.values);
    let values: Vec<f64> = en_values(&region, degrees)?.into_iter().map(|e| eig.condition * e).collect();
    let clamped = values.iter().map(|v| v.min(1.0)).collect();
    Ok(BoundCurve {
        degrees: degrees.to_vec(),
        values,
        clamped,
        region_id: "eigenvalues".into(),
        method: "spectral (column-normalized V, upper estimate)".into(),
    })
}
