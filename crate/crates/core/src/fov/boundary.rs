//! Field-of-values boundaries by the rotation method.
//!
//! For each angle `θ` the largest eigenvalue `λ(θ)` of the Hermitian part of
//! `e^{iθ}Ã` gives the supporting line `Re(e^{iθ}z) = λ(θ)` of `W(Ã)`, and its
//! eigenvector `x` the boundary point `x*Ãx`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::dense::{skew_part, sym_part, Matrix};
use crate::linalg::lanczos::{default_start, extreme_eigenpair, Extreme, LanczosOptions};
use crate::linalg::space::WeightedSpace;

/// Largest dimension for which the rotated Hermitian parts are diagonalized
/// densely instead of by Lanczos.
const DENSE_LIMIT: usize = 256;
/// Angles per independent warm-started chunk. Fixed so that results do not
/// depend on the number of threads.
const CHUNK: usize = 8;
/// Weight of the fixed random direction mixed into warm starts, so that the
/// top eigenvector is never missing from the Krylov space.
const WARM_MIX: f64 = 0.1;
/// Relative violation of a supporting half-plane that triggers a recompute.
const SUPPORT_SLACK: f64 = 1e-9;
/// Rounds of half-plane consistency repair.
const REPAIR_ROUNDS: usize = 3;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FovBoundary {
    /// Supporting points `x*Ãx`, one per angle.
    pub points: Vec<Complex64>,
    /// Rotation angles `θ_k = 2πk/n`.
    pub angles: Vec<f64>,
    /// `λ_max(Herm(e^{iθ_k}Ã))`, the offsets of the supporting lines.
    pub support: Vec<f64>,
    pub max_im: f64,
    pub max_abs: f64,
}

impl FovBoundary {
    /// Whether `z` satisfies every supporting half-plane `Re(e^{iθ}z) ≤ λ(θ)`
    /// up to `slack`.
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        self.angles
            .iter()
            .zip(&self.support)
            .all(|(t, s)| (Complex64::from_polar(1.0, *t) * z).re <= s + slack)
    }

    /// Largest modulus over the supporting lines, an upper bound for the
    /// numerical radius on this angle grid.
    pub fn scale(&self) -> f64 {
        self.max_abs.max(f64::MIN_POSITIVE)
    }
}

/// The symmetric and skew parts of a transformed matrix, with the rotated
/// Hermitian eigenproblem `cos θ·S + i sin θ·K` in its real `2n` embedding.
#[derive(Debug, Clone)]
pub(crate) struct Rotator {
    s: Matrix,
    k: Matrix,
}

impl Rotator {
    pub fn new(at: &Matrix) -> Self {
        Self {
            s: sym_part(at),
            k: skew_part(at),
        }
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    /// Largest eigenvalue and eigenvector `[a; b]` (for `x = a + ib`).
    pub fn top(&self, theta: f64, start: Option<&[f64]>) -> Result<(f64, Vec<f64>)> {
        let n = self.dim();
        let (c, s) = (theta.cos(), theta.sin());
        if n <= DENSE_LIMIT {
            let h = DMatrix::<Complex64>::from_fn(n, n, |i, j| Complex64::new(c * self.s[(i, j)], s * self.k[(i, j)]));
            let eig = SymmetricEigen::try_new(h, 1e-15, 10_000)
                .ok_or_else(|| Error::EigFailure("Hermitian eigensolver did not converge".into()))?;
            let idx = eig.eigenvalues.imax();
            let col = eig.eigenvectors.column(idx);
            let mut v: Vec<f64> = col.iter().map(|z| z.re).collect();
            v.extend(col.iter().map(|z| z.im));
            return Ok((eig.eigenvalues[idx], v));
        }
        let op = |v: &[f64]| -> Vec<f64> {
            let a = nalgebra::DVectorView::from_slice(&v[..n], n);
            let b = nalgebra::DVectorView::from_slice(&v[n..], n);
            let (sa, sb) = (&self.s * a, &self.s * b);
            let (ka, kb) = (&self.k * a, &self.k * b);
            let mut out: Vec<f64> = (0..n).map(|i| c * sa[i] - s * kb[i]).collect();
            out.extend((0..n).map(|i| s * ka[i] + c * sb[i]));
            out
        };
        let opts = LanczosOptions {
            tol: 1e-10,
            max_steps: 20_000,
            max_basis: 120,
            stall_tol: Some(1e-10),
        };
        let start = start.map(|w| {
            let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let r = default_start(2 * n);
            w.iter().zip(&r).map(|(a, b)| a / nw + WARM_MIX * b).collect::<Vec<f64>>()
        });
        let pair = extreme_eigenpair(2 * n, &op, Extreme::Largest, start.as_deref(), &opts);
        if !pair.converged {
            return Err(Error::EigFailure(format!(
                "Lanczos stalled at relative residual {:e} for angle {theta}",
                pair.residual
            )));
        }
        Ok((pair.value, pair.vector))
    }

    /// `x*Ãx` for the unit vector `x = a + ib`.
    pub fn point(&self, v: &[f64]) -> Complex64 {
        let n = self.dim();
        let a = nalgebra::DVectorView::from_slice(&v[..n], n);
        let b = nalgebra::DVectorView::from_slice(&v[n..], n);
        let nrm = a.norm_squared() + b.norm_squared();
        let re = a.dot(&(&self.s * a)) + b.dot(&(&self.s * b));
        let im = 2.0 * a.dot(&(&self.k * b));
        Complex64::new(re, im) / nrm
    }
}

pub(crate) fn angle_grid(n_angles: usize) -> Vec<f64> {
    (0..n_angles)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n_angles as f64)
        .collect()
}

/// Supporting offset, point and eigenvector for one angle.
type Support = (f64, Complex64, Vec<f64>);

/// Supporting offsets and points for each angle, in angle order.
///
/// Every computed value is a Rayleigh quotient, hence a lower bound for the
/// true offset. A point that violates another angle's half-plane exposes an
/// underestimate there, and that angle is recomputed from the violating
/// eigenvector.
pub(crate) fn sweep(rot: &Rotator, angles: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    let chunks: Vec<Result<Vec<Support>>> = angles
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut out: Vec<Support> = Vec::with_capacity(chunk.len());
            for &t in chunk {
                let warm = out.last().map(|s| s.2.as_slice());
                let (lam, v) = rot.top(t, warm)?;
                out.push((lam, rot.point(&v), v));
            }
            Ok(out)
        })
        .collect();
    let mut all: Vec<Support> = Vec::with_capacity(angles.len());
    for c in chunks {
        all.extend(c?);
    }
    for _ in 0..REPAIR_ROUNDS {
        let scale = all.iter().fold(f64::MIN_POSITIVE, |m, s| m.max(s.1.norm()));
        let bad: Vec<(usize, usize)> = angles
            .iter()
            .enumerate()
            .filter_map(|(j, &t)| {
                let rot_j = Complex64::from_polar(1.0, t);
                let (k, v) = all
                    .iter()
                    .enumerate()
                    .map(|(k, s)| (k, (rot_j * s.1).re))
                    .max_by(|a, b| a.1.total_cmp(&b.1))?;
                (v > all[j].0 + SUPPORT_SLACK * scale).then_some((j, k))
            })
            .collect();
        if bad.is_empty() {
            break;
        }
        let redo: Vec<Result<(usize, Support)>> = bad
            .par_iter()
            .map(|&(j, k)| {
                let (lam, v) = rot.top(angles[j], Some(&all[k].2))?;
                Ok((j, (lam, rot.point(&v), v)))
            })
            .collect();
        for r in redo {
            let (j, s) = r?;
            if s.0 > all[j].0 {
                all[j] = s;
            }
        }
    }
    Ok(all.into_iter().map(|s| (s.0, s.1)).collect())
}

/// Boundary of `W(Ã)` for an already transformed matrix.
pub(crate) fn boundary_of(at: &Matrix, n_angles: usize) -> Result<FovBoundary> {
    if n_angles < 8 {
        return Err(Error::InvalidParams(format!("need at least 8 angles, got {n_angles}")));
    }
    let rot = Rotator::new(at);
    let angles = angle_grid(n_angles);
    let res = sweep(&rot, &angles)?;
    let support: Vec<f64> = res.iter().map(|r| r.0).collect();
    let points: Vec<Complex64> = res.iter().map(|r| r.1).collect();
    let max_im = points.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let max_abs = points.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    Ok(FovBoundary {
        points,
        angles,
        support,
        max_im,
        max_abs,
    })
}

/// Boundary of the `H`-field of values `W_H(A) = W(T A T⁻¹)`.
pub fn fov_boundary(a: &Matrix, space: &WeightedSpace, n_angles: usize) -> Result<FovBoundary> {
    check_square(a, space)?;
    boundary_of(&space.similarity(a), n_angles)
}

pub(crate) fn check_square(a: &Matrix, space: &WeightedSpace) -> Result<()> {
    check_dim(a.nrows(), a.ncols())?;
    check_dim(space.dim(), a.nrows())
}

/// Numerical radius `max_θ λ_max(Herm(e^{iθ}Ã))` of an already transformed
/// matrix, refined by golden-section search around the best grid angle.
pub(crate) fn numerical_radius_of(at: &Matrix, n_angles: usize) -> Result<f64> {
    let rot = Rotator::new(at);
    let angles = angle_grid(n_angles);
    let res = sweep(&rot, &angles)?;
    let (best, _) = res
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, r)| if r.0 > bv { (i, r.0) } else { (bi, bv) });
    let step = angles[1] - angles[0];
    let f = |t: f64| rot.top(t, None).map(|r| r.0);
    let (mut lo, mut hi) = (angles[best] - step, angles[best] + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-8 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(res[best].0.max(f1).max(f2))
}

/// Numerical radius `w_H(A) = max{|z| : z ∈ W_H(A)}`.
pub fn numerical_radius(a: &Matrix, space: &WeightedSpace) -> Result<f64> {
    check_square(a, space)?;
    numerical_radius_of(&space.similarity(a), 256)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eye(n: usize) -> WeightedSpace {
        WeightedSpace::euclidean(n)
    }

    #[test]
    fn identity_is_a_point() {
        let b = fov_boundary(&Matrix::identity(3, 3), &eye(3), 16).unwrap();
        assert!(b.points.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn nilpotent_block_gives_half_disk() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let b = fov_boundary(&a, &eye(2), 32).unwrap();
        assert!(b.points.iter().all(|z| (z.norm() - 0.5).abs() < 1e-8));
        assert!((numerical_radius(&a, &eye(2)).unwrap() - 0.5).abs() < 1e-10);
    }

    #[test]
    fn diagonal_gives_segment() {
        let a = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 2.0]));
        let b = fov_boundary(&a, &eye(2), 16).unwrap();
        for z in &b.points {
            assert!(z.im.abs() < 1e-12 && z.re >= -1.0 - 1e-12 && z.re <= 2.0 + 1e-12);
        }
        assert!((numerical_radius(&a, &eye(2)).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn lanczos_path_matches_dense_path() {
        let n = DENSE_LIMIT + 4;
        let a = Matrix::from_fn(n, n, |i, j| ((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.4 + if i == j { 2.0 } else { 0.0 });
        let rot = Rotator::new(&a);
        for t in [0.3, 2.0, 4.5] {
            let (lam, v) = rot.top(t, None).unwrap();
            let h = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
                Complex64::new(t.cos() * rot.s[(i, j)], t.sin() * rot.k[(i, j)])
            });
            let dense = SymmetricEigen::new(h).eigenvalues.max();
            assert!((lam - dense).abs() < 1e-9 * dense.abs().max(1.0));
            let z = rot.point(&v);
            assert!(((Complex64::from_polar(1.0, t) * z).re - lam).abs() < 1e-8);
        }
    }
}
