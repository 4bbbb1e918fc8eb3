//! Preconditioned GMRES on a saddle-point system.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::krylov::{gmres, FnOperator, GmresOptions, GmresTrace};
use crate::linalg::dense::norm2;
use crate::linalg::space::WeightedSpace;
use crate::precond::block::{BlockPreconditioner, Side};
use crate::precond::system::SaddlePointSystem;

/// Norm in which GMRES minimizes the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormChoice {
    L2,
    H,
    HInv,
}

impl NormChoice {
    /// `H` for left preconditioning, `H⁻¹` for right preconditioning.
    pub fn natural(side: Side) -> Self {
        match side {
            Side::Left => NormChoice::H,
            Side::Right => NormChoice::HInv,
        }
    }

    pub fn space(&self, sys: &SaddlePointSystem) -> WeightedSpace {
        match self {
            NormChoice::L2 => WeightedSpace::euclidean(sys.dim()),
            NormChoice::H => sys.h_space(),
            NormChoice::HInv => sys.h_space().inverse(),
        }
    }
}

impl fmt::Display for NormChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormChoice::L2 => "l2",
            NormChoice::H => "h",
            NormChoice::HInv => "hinv",
        })
    }
}

impl FromStr for NormChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l2" => Ok(NormChoice::L2),
            "h" => Ok(NormChoice::H),
            "hinv" => Ok(NormChoice::HInv),
            _ => Err(Error::InvalidParams(format!("unknown norm '{s}'"))),
        }
    }
}

/// Runs GMRES on `M⁻¹K` (left) or `KM⁻¹` (right) with zero initial guess.
/// `norm = None` selects the natural norm of the side.
pub fn solve_preconditioned(
    sys: &SaddlePointSystem,
    m: &BlockPreconditioner,
    rhs: &[f64],
    opts: &GmresOptions,
    norm: Option<NormChoice>,
) -> Result<(Vec<f64>, GmresTrace)> {
    let d = sys.dim();
    check_dim(d, rhs.len())?;
    check_dim(d, m.dim())?;
    let space = norm.unwrap_or_else(|| NormChoice::natural(m.side())).space(sys);
    let x0 = vec![0.0; d];
    let (x, mut trace) = match m.side() {
        Side::Left => {
            let op = FnOperator::new(d, |v: &[f64]| m.apply_inverse(&sys.apply_k(v)));
            let b = m.apply_inverse(rhs);
            gmres(&op, &b, &x0, &space, opts)?
        }
        Side::Right => {
            let op = FnOperator::new(d, |v: &[f64]| sys.apply_k(&m.apply_inverse(v)));
            let (y, t) = gmres(&op, rhs, &x0, &space, opts)?;
            (m.apply_inverse(&y), t)
        }
    };
    let mut r = sys.apply_k(&x);
    r.iter_mut().zip(rhs).for_each(|(a, b)| *a = b - *a);
    trace.unpreconditioned_residual = Some(norm2(&r));
    Ok((x, trace))
}
