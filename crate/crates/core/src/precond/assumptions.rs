//! Numerical checks of the standing assumptions and the norm bounds on `F`,
//! `F⁻¹` and `S⁻¹` that follow from them.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::krylov::{gmres, FnOperator, GmresOptions};
use crate::linalg::band::BandLu;
use crate::linalg::norms::{op_norm_action, NormOptions};
use crate::linalg::space::WeightedSpace;
use crate::precond::system::SaddlePointSystem;

/// Relative residual of the inner Schur-complement solves.
const SCHUR_TOL: f64 = 1e-13;

/// `S⁻¹g` (or `S⁻ᵀg`) for `S = B F⁻¹ Bᵀ`, by GMRES on `S` with exact `F`
/// solves. Full GMRES on an `m`-dimensional operator terminates, so the
/// result is exact up to rounding.
fn schur_solve(sys: &SaddlePointSystem, f_lu: &BandLu, g: &[f64], transpose: bool) -> Vec<f64> {
    let m = sys.m();
    let op = FnOperator::new(m, |x: &[f64]| {
        let y = sys.bt().matvec(x);
        let z = if transpose { f_lu.solve_transpose(&y) } else { f_lu.solve(&y) };
        sys.b().matvec(&z)
    });
    let opts = GmresOptions {
        tol: SCHUR_TOL,
        max_iter: m,
        ..Default::default()
    };
    let (x, _) = gmres(&op, g, &vec![0.0; m], &WeightedSpace::euclidean(m), &opts).expect("dimensions agree");
    x
}

/// Relative slack allowed when comparing a computed norm with its bound.
pub const CHECK_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl LemmaCheck {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            pass: lhs <= rhs * (1.0 + CHECK_SLACK),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// `‖N‖_{H1,H1⁻¹}`
    pub eta: f64,
    /// `‖B‖_{H1,H2⁻¹}`
    pub c1: f64,
    /// `min ‖Bᵀx‖_{H1⁻¹} / ‖x‖_{H2}`
    pub c2: f64,
    /// `‖F‖_{H1,H1⁻¹}`
    pub f_norm: f64,
    /// `‖F⁻¹‖_{H1⁻¹,H1}`
    pub finv_norm: f64,
    /// `‖S⁻¹‖_{H2⁻¹,H2}`
    pub sinv_norm: f64,
    /// `(1 + η)² / C2²`
    pub sinv_bound: f64,
    pub lemma_checks: Vec<LemmaCheck>,
}

impl AssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.lemma_checks.iter().all(|c| c.pass)
    }
}

/// Measures `η`, `C1`, `C2` and checks the bounds
/// `‖F‖ ≤ 1 + η`, `‖F⁻¹‖ ≤ 1` and `‖S⁻¹‖ ≤ (1 + η)² / C2²`.
pub fn verify_assumptions(sys: &SaddlePointSystem) -> Result<AssumptionReport> {
    let h1 = sys.h1_space();
    let h1_inv = h1.inverse();
    let h2 = sys.h2_space();
    let h2_inv = h2.inverse();
    let opts = NormOptions::default();
    let n_mat = sys.skew();
    let f = sys.f();
    let ft = f.transpose();
    let f_lu = sys.factor_f()?;

    let ((eta, f_norm), (finv_norm, sinv_norm)) = rayon::join(
        || {
            rayon::join(
                || {
                    let ap = |x: &[f64]| n_mat.matvec(x);
                    // Nᵀ = −N
                    let at = |x: &[f64]| n_mat.matvec(x).into_iter().map(|v| -v).collect();
                    op_norm_action(&ap, &at, h1, &h1_inv, opts).value
                },
                || {
                    let ap = |x: &[f64]| f.matvec(x);
                    let at = |x: &[f64]| ft.matvec(x);
                    op_norm_action(&ap, &at, h1, &h1_inv, opts).value
                },
            )
        },
        || {
            rayon::join(
                || {
                    let ap = |x: &[f64]| f_lu.solve(x);
                    let at = |x: &[f64]| f_lu.solve_transpose(x);
                    op_norm_action(&ap, &at, &h1_inv, h1, opts).value
                },
                || {
                    let ap = |x: &[f64]| schur_solve(sys, &f_lu, x, false);
                    let at = |x: &[f64]| schur_solve(sys, &f_lu, x, true);
                    op_norm_action(&ap, &at, &h2_inv, h2, opts).value
                },
            )
        },
    );
    let bounds = sys.constraint_bounds();
    let sinv_bound = (1.0 + eta).powi(2) / (bounds.c2 * bounds.c2);
    let lemma_checks = vec![
        LemmaCheck::new("weighted norm of F", f_norm, 1.0 + eta),
        LemmaCheck::new("weighted norm of F inverse", finv_norm, 1.0),
        LemmaCheck::new("weighted norm of S inverse", sinv_norm, sinv_bound),
    ];
    Ok(AssumptionReport {
        eta,
        c1: bounds.c1,
        c2: bounds.c2,
        f_norm,
        finv_norm,
        sinv_norm,
        sinv_bound,
        lemma_checks,
    })
}
