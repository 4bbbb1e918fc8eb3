//! Convergence certificates from the constants `a`, `b`, `c` and the region
//! `Ω_CG`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fov::boundary::{boundary_of, check_square, numerical_radius_of, FovBoundary};
use crate::fov::region::{RegionCG, DEFAULT_SAMPLES};
use crate::linalg::dense::{skew_part, Matrix};
use crate::linalg::lu::DenseLu;
use crate::linalg::norms::{inv_norm, op_norm, NormOptions};
use crate::linalg::space::WeightedSpace;

/// Largest operator dimension that is materialized densely.
pub const DIMENSION_GUARD: usize = 2500;
/// `bc < 1` is only certified with this margin.
pub const COND4_MARGIN: f64 = 1e-6;
pub const DEFAULT_ANGLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateOptions {
    pub n_angles: usize,
    pub region_samples: usize,
    pub guard: usize,
    /// Also compute the numerical radius of `A⁻¹`.
    pub numerical_radius: bool,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self {
            n_angles: DEFAULT_ANGLES,
            region_samples: DEFAULT_SAMPLES,
            guard: DIMENSION_GUARD,
            numerical_radius: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FovCertificate {
    /// `‖A‖_H`
    pub a: f64,
    /// `‖A⁻¹‖_H`
    pub b: f64,
    /// `‖(HA − AᵀH)/2‖_{H,H⁻¹}`
    pub c: f64,
    pub bc: f64,
    pub cond4_pass: bool,
    /// `1/b`, the radius of the disk removed from `W_H(A)`.
    pub inner_radius: f64,
    /// `w_H(A⁻¹)`, when requested.
    pub numerical_radius_inv: Option<f64>,
    pub boundary: FovBoundary,
    pub origin_excluded: bool,
    pub region: RegionCG,
}

/// `(a, b, c)` of an already transformed matrix `Ã = T A T⁻¹`.
pub(crate) fn constants_of(at: &Matrix) -> Result<(f64, f64, f64)> {
    let n = at.nrows();
    let e = WeightedSpace::euclidean(n);
    let opts = NormOptions::default();
    let (a, b) = rayon::join(|| op_norm(at, &e, &e, opts), || inv_norm(at, &e, &e, opts));
    let c = op_norm(&skew_part(at), &e, &e, opts)?;
    Ok((a?.value, b?.value, c.value))
}

/// `a = ‖A‖_H`, `b = ‖A⁻¹‖_H` and `c = ‖skew(T A T⁻¹)‖₂`.
pub fn constants_abc(a: &Matrix, space: &WeightedSpace) -> Result<(f64, f64, f64)> {
    check_square(a, space)?;
    constants_of(&space.similarity(a))
}

/// Assembles the constants, the field-of-values boundary, the region `Ω_CG`
/// and the verdicts for a dense operator in the geometry of `space`.
pub fn certificate(a: &Matrix, space: &WeightedSpace, opts: &CertificateOptions) -> Result<FovCertificate> {
    let dim = a.nrows();
    if dim > opts.guard {
        return Err(Error::DimensionGuard { dim, guard: opts.guard });
    }
    check_square(a, space)?;
    let at = space.similarity(a);
    let ((consts, boundary), winv) = rayon::join(
        || rayon::join(|| constants_of(&at), || boundary_of(&at, opts.n_angles)),
        || -> Result<Option<f64>> {
            if !opts.numerical_radius {
                return Ok(None);
            }
            let inv = DenseLu::new(&at)?.inverse();
            numerical_radius_of(&inv, opts.n_angles).map(Some)
        },
    );
    let (a_, b, c) = consts?;
    let boundary = boundary?;
    let inner_radius = 1.0 / b;
    let region = RegionCG::from_convex(&boundary.points, inner_radius, opts.region_samples)?;
    let bc = b * c;
    Ok(FovCertificate {
        a: a_,
        b,
        c,
        bc,
        cond4_pass: bc <= 1.0 - COND4_MARGIN,
        inner_radius,
        numerical_radius_inv: winv?,
        boundary,
        origin_excluded: region.origin_excluded,
        region,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn identity_constants() {
        let (a, b, c) = constants_abc(&Matrix::identity(4, 4), &WeightedSpace::euclidean(4)).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12 && c == 0.0);
    }

    #[test]
    fn rotation_fails_condition() {
        let r = Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]);
        let cert = certificate(&r, &WeightedSpace::euclidean(2), &CertificateOptions::default()).unwrap();
        assert!((cert.bc - 1.0).abs() < 1e-10);
        assert!(!cert.cond4_pass);
    }

    #[test]
    fn scaled_identity_region_is_a_point() {
        let a = Matrix::identity(3, 3) * 1.5;
        let opts = CertificateOptions {
            numerical_radius: true,
            ..Default::default()
        };
        let cert = certificate(&a, &WeightedSpace::euclidean(3), &opts).unwrap();
        assert!(cert.cond4_pass && cert.origin_excluded);
        assert_eq!(cert.c, 0.0);
        assert!((cert.inner_radius - 1.5).abs() < 1e-12);
        assert!((cert.numerical_radius_inv.unwrap() - 1.0 / 1.5).abs() < 1e-10);
        assert!(cert.region.is_discrete());
        assert!((cert.region.discrete[0] - Complex64::new(1.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn guard_refuses_large_operators() {
        let opts = CertificateOptions {
            guard: 3,
            ..Default::default()
        };
        let r = certificate(&Matrix::identity(4, 4), &WeightedSpace::euclidean(4), &opts);
        assert!(matches!(r, Err(Error::DimensionGuard { dim: 4, guard: 3 })));
    }
}
