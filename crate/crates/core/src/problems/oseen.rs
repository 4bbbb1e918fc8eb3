//! Finite-difference Oseen problem in the lid-driven cavity.

use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::precond::system::{assemble, SaddlePointSystem, SystemMeta};
use crate::problems::grid::{GridSpec, WindField};
use crate::problems::mac::{remove_mean, Mac};

/// Regularized lid profile `1 − (2x − 1)⁴`.
pub fn lid_velocity(x: f64) -> f64 {
    1.0 - (2.0 * x - 1.0).powi(4)
}

/// Oseen system `−νΔu + (b·∇)u + ∇p = 0`, `∇·u = 0` on the unit square,
/// divided by `ν` so that the leading block is `H₁ + N/ν` with `H₁` the
/// vector Laplacian. The lid velocity enters the right-hand side only.
/// The pressure is restricted to mean zero and `H₂ = h²I`.
pub fn oseen_fd(grid: GridSpec, nu: f64, wind: &WindField) -> Result<SaddlePointSystem> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParams(format!("viscosity must be positive, got {nu}")));
    }
    let g = Mac::new(grid.cells());
    let nv = g.n_velocity();
    let h1 = CsrMatrix::from_triplets(nv, nv, &g.laplacian())?;
    let conv = g.convection(wind)?;
    let f = h1.add_scaled(1.0 / nu, &conv)?;
    let b = remove_mean(&g.divergence());
    let h2 = CsrMatrix::identity(b.nrows()).scaled(grid.h() * grid.h());

    let n = grid.cells();
    let mut rhs = vec![0.0; nv + b.nrows()];
    for i in 1..n {
        // reflected ghost above the top row of u
        rhs[g.u(i, n - 1)] = 2.0 * lid_velocity(i as f64 * grid.h());
    }
    let meta = SystemMeta::new("oseen", nu, Some(n)).with_param("h", grid.h());
    assemble(&f, &b, &h2, meta)?.with_rhs(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stokes_limit_has_no_skew_part() {
        let s = oseen_fd(GridSpec::new(4).unwrap(), 1.0, &WindField::zero()).unwrap();
        assert_eq!(s.skew().nnz(), 0);
        assert_eq!(s.n(), 24);
        assert_eq!(s.m(), 15);
        assert!(s.rhs.as_ref().unwrap()[..s.n()].iter().any(|v| *v > 0.0));
    }

    #[test]
    fn skew_part_scales_with_viscosity() {
        let w = WindField::recirculating(1.0);
        let g = GridSpec::new(6).unwrap();
        let a = oseen_fd(g, 1.0, &w).unwrap();
        let b = oseen_fd(g, 2.0, &w).unwrap();
        let ra = a.skew().frobenius_norm();
        let rb = b.skew().frobenius_norm();
        assert!(ra > 0.0);
        assert!((ra / rb - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_viscosity() {
        let g = GridSpec::new(4).unwrap();
        assert!(oseen_fd(g, 0.0, &WindField::zero()).is_err());
        assert!(oseen_fd(g, f64::NAN, &WindField::zero()).is_err());
    }
}
