//! Weighted operator norms `‖T_to M T_from⁻¹‖₂` and their inverse counterparts.
//!
//! The largest singular value is obtained from the largest eigenvalue of the
//! Gram operator `CᵀC` by Lanczos; see the module docs of [`crate::linalg`]
//! for the transform convention.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dense::{matvec, matvec_t, Matrix};
use crate::linalg::lanczos::{extreme_eigenpair, Extreme, LanczosOptions};
use crate::linalg::lu::DenseLu;
use crate::linalg::space::WeightedSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Relative Ritz residual at termination.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct NormOptions {
    pub tol: f64,
    pub maxit: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            maxit: 10_000,
        }
    }
}

/// `‖T_to M T_from⁻¹‖₂` for an operator given by its action and the action
/// of its transpose. `apply` maps `from.dim()` vectors to `to.dim()` vectors.
pub fn op_norm_action(
    apply: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    apply_t: &(dyn Fn(&[f64]) -> Vec<f64> + Sync),
    from: &WeightedSpace,
    to: &WeightedSpace,
    opts: NormOptions,
) -> NormEstimate {
    let n = from.dim();
    let gram = |x: &[f64]| -> Vec<f64> {
        let y = to.transform(&apply(&from.inv_transform(x)));
        from.inv_transform_t(&apply_t(&to.transform_t(&y)))
    };
    let lopts = LanczosOptions {
        // The eigenvalue of the Gram operator is accurate to the square of the
        // relative residual when the top eigenvalue is isolated, and to the
        // residual itself in the clustered case.
        tol: opts.tol.max(1e-14),
        max_steps: opts.maxit.max(1),
        ..LanczosOptions::default()
    };
    let pair = extreme_eigenpair(n, &gram, Extreme::Largest, None, &lopts);
    NormEstimate {
        value: pair.value.max(0.0).sqrt(),
        iterations: pair.iterations,
        converged: pair.converged,
        residual: pair.residual,
    }
}

/// Weighted norm of a dense matrix, `‖T_to M T_from⁻¹‖₂`.
pub fn op_norm(
    m: &Matrix,
    from: &WeightedSpace,
    to: &WeightedSpace,
    opts: NormOptions,
) -> Result<NormEstimate> {
    if m.ncols() != from.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: m.ncols(),
        });
    }
    if m.nrows() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: to.dim(),
            found: m.nrows(),
        });
    }
    let f = |x: &[f64]| matvec(m, x);
    let ft = |x: &[f64]| matvec_t(m, x);
    Ok(op_norm_action(&f, &ft, from, to, opts))
}

/// `‖M⁻¹‖` in the weighted norms, i.e. the reciprocal of the smallest singular
/// value of `T_to M T_from⁻¹`. Uses an LU factorization of `M`.
pub fn inv_norm(
    m: &Matrix,
    from: &WeightedSpace,
    to: &WeightedSpace,
    opts: NormOptions,
) -> Result<NormEstimate> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.ncols() != from.dim() || m.nrows() != to.dim() {
        return Err(Error::DimensionMismatch {
            expected: from.dim(),
            found: m.ncols(),
        });
    }
    let lu = DenseLu::new(m)?;
    let f = |x: &[f64]| lu.solve(x);
    let ft = |x: &[f64]| lu.solve_transpose(x);
    // M⁻¹ maps the `to` space back to the `from` space.
    Ok(op_norm_action(&f, &ft, to, from, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::space::factor_spd;
    use nalgebra::DVector;

    #[test]
    fn trivial_norms() {
        let e = WeightedSpace::euclidean(2);
        let o = NormOptions::default();
        assert!((op_norm(&Matrix::identity(2, 2), &e, &e, o).unwrap().value - 1.0).abs() < 1e-12);
        let d = Matrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0]));
        assert!((op_norm(&d, &e, &e, o).unwrap().value - 3.0).abs() < 1e-12);
        let d = Matrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
        assert!((inv_norm(&d, &e, &e, o).unwrap().value - 2.0).abs() < 1e-12);
        assert!((inv_norm(&Matrix::identity(3, 3), &WeightedSpace::euclidean(3), &WeightedSpace::euclidean(3), o).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_matches_svd() {
        let h1 = Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let h2 = Matrix::from_row_slice(3, 3, &[3.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0]);
        let m = Matrix::from_row_slice(3, 2, &[1.0, 2.0, -1.0, 0.5, 0.0, 3.0]);
        let s1 = factor_spd(&h1).unwrap();
        let s2 = factor_spd(&h2).unwrap();
        let c = s2.transform_matrix() * &m * s1.transform_matrix().try_inverse().unwrap();
        let sv = c.singular_values();
        let est = op_norm(&m, &s1, &s2, NormOptions::default()).unwrap();
        assert!(est.converged);
        assert!((est.value - sv.max()).abs() < 1e-10 * sv.max());
    }

    #[test]
    fn dimension_checks() {
        let m = Matrix::zeros(2, 3);
        let e2 = WeightedSpace::euclidean(2);
        assert!(op_norm(&m, &e2, &e2, NormOptions::default()).is_err());
        let sing = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            inv_norm(&sing, &e2, &e2, NormOptions::default()),
            Err(Error::Singular { .. })
        ));
    }
}
