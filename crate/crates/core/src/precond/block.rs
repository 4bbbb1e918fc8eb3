//! Block preconditioners `M_D`, `M_U`, `M_L` and the inexact upper variant.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::band::BandLu;
use crate::linalg::dense::{materialize, Matrix};
use crate::linalg::lu::DenseLu;
use crate::linalg::norms::{op_norm_action, NormOptions};
use crate::linalg::sparse::CsrMatrix;
use crate::linalg::space::WeightedSpace;
use crate::precond::system::SaddlePointSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `diag(F, H2)`
    Diagonal,
    /// `[[F, Bᵀ], [0, H2]]`
    Upper,
    /// `[[F, 0], [B, H2]]`
    Lower,
    /// `[[P1, Bᵀ], [0, H2]]` with `P1⁻¹` a fixed number of symmetric
    /// Gauss–Seidel sweeps on `F`.
    InexactUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Diagonal => "diag",
            Variant::Upper => "upper",
            Variant::Lower => "lower",
            Variant::InexactUpper => "inexact-upper",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diag" | "diagonal" => Ok(Variant::Diagonal),
            "upper" => Ok(Variant::Upper),
            "lower" => Ok(Variant::Lower),
            "inexact-upper" => Ok(Variant::InexactUpper),
            _ => Err(Error::InvalidParams(format!("unknown preconditioner '{s}'"))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::InvalidParams(format!("unknown side '{s}'"))),
        }
    }
}

/// Symmetric Gauss–Seidel approximation of `F⁻¹`: `sweeps` forward/backward
/// sweep pairs on `F x = b` from `x = 0`.
#[derive(Debug, Clone)]
pub struct SgsSweeps {
    f: CsrMatrix,
    diag: Vec<f64>,
    sweeps: usize,
}

impl SgsSweeps {
    pub fn new(f: &CsrMatrix, sweeps: usize) -> Result<Self> {
        if sweeps == 0 {
            return Err(Error::InvalidParams("at least one sweep is required".into()));
        }
        let diag = f.diagonal();
        if let Some(index) = diag.iter().position(|d| *d == 0.0) {
            return Err(Error::ZeroDiagonal { index });
        }
        Ok(Self {
            f: f.clone(),
            diag,
            sweeps,
        })
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// `P1⁻¹ b`
    pub fn apply(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut x = vec![0.0; n];
        for _ in 0..self.sweeps {
            for i in 0..n {
                self.relax(i, b, &mut x);
            }
            for i in (0..n).rev() {
                self.relax(i, b, &mut x);
            }
        }
        x
    }

    /// `P1⁻ᵀ b`: the same sweeps applied to `Fᵀ`.
    pub fn apply_transpose(&self, b: &[f64]) -> Vec<f64> {
        let ft = self.f.transpose();
        let t = SgsSweeps {
            f: ft,
            diag: self.diag.clone(),
            sweeps: self.sweeps,
        };
        t.apply(b)
    }

    #[inline]
    fn relax(&self, i: usize, b: &[f64], x: &mut [f64]) {
        let mut s = b[i];
        for (j, v) in self.f.row(i) {
            if j != i {
                s -= v * x[j];
            }
        }
        x[i] = s / self.diag[i];
    }
}

/// Checkable constants of the inexact leading-block solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InexactReport {
    pub sweeps: usize,
    /// `‖P1⁻¹F − I‖_{H1}`
    pub defect: f64,
    /// `‖F⁻¹P1‖_{H1}`, computed densely when `n` is at most
    /// [`INEXACT_DENSE_LIMIT`].
    pub finv_p1: Option<f64>,
}

pub const INEXACT_DENSE_LIMIT: usize = 3000;

/// Builds the sweep approximation `P1⁻¹` and reports the two constants that
/// govern inexact preconditioning.
pub fn make_inexact_p1(sys: &SaddlePointSystem, sweeps: usize) -> Result<(SgsSweeps, InexactReport)> {
    let p1 = SgsSweeps::new(sys.f(), sweeps)?;
    let f = sys.f();
    let ft = f.transpose();
    let h1 = sys.h1_space();
    let e = |x: &[f64]| -> Vec<f64> {
        let mut y = p1.apply(&f.matvec(x));
        y.iter_mut().zip(x).for_each(|(a, b)| *a -= b);
        y
    };
    let et = |x: &[f64]| -> Vec<f64> {
        let mut y = ft.matvec(&p1.apply_transpose(x));
        y.iter_mut().zip(x).for_each(|(a, b)| *a -= b);
        y
    };
    let defect = op_norm_action(&e, &et, h1, h1, NormOptions::default()).value;
    let finv_p1 = if sys.n() <= INEXACT_DENSE_LIMIT {
        // F⁻¹P1 = (P1⁻¹F)⁻¹
        let pf = materialize(sys.n(), sys.n(), |x| p1.apply(&f.matvec(x)));
        let lu = DenseLu::new(&pf)?;
        let g = |x: &[f64]| lu.solve(x);
        let gt = |x: &[f64]| lu.solve_transpose(x);
        Some(op_norm_action(&g, &gt, h1, h1, NormOptions::default()).value)
    } else {
        None
    };
    Ok((
        p1.clone(),
        InexactReport {
            sweeps,
            defect,
            finv_p1,
        },
    ))
}

#[derive(Debug, Clone)]
enum LeadingSolve {
    Exact(BandLu),
    Sweeps(SgsSweeps),
}

impl LeadingSolve {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        match self {
            LeadingSolve::Exact(lu) => lu.solve(b),
            LeadingSolve::Sweeps(p) => p.apply(b),
        }
    }
}

/// A block preconditioner together with its application side.
#[derive(Debug, Clone)]
pub struct BlockPreconditioner {
    variant: Variant,
    side: Side,
    leading: LeadingSolve,
    h2: WeightedSpace,
    h2_matrix: CsrMatrix,
    f: CsrMatrix,
    b: CsrMatrix,
    bt: CsrMatrix,
    n: usize,
}

/// Default number of symmetric Gauss–Seidel sweeps for the inexact variant.
pub const DEFAULT_SWEEPS: usize = 4;

impl BlockPreconditioner {
    pub fn new(sys: &SaddlePointSystem, variant: Variant, side: Side) -> Result<Self> {
        Self::with_sweeps(sys, variant, side, DEFAULT_SWEEPS)
    }

    pub fn with_sweeps(sys: &SaddlePointSystem, variant: Variant, side: Side, sweeps: usize) -> Result<Self> {
        let leading = match variant {
            Variant::InexactUpper => LeadingSolve::Sweeps(SgsSweeps::new(sys.f(), sweeps)?),
            _ => LeadingSolve::Exact(sys.factor_f()?),
        };
        Ok(Self {
            variant,
            side,
            leading,
            h2: sys.h2_space().clone(),
            h2_matrix: sys.h2().clone(),
            f: sys.f().clone(),
            b: sys.b().clone(),
            bt: sys.bt().clone(),
            n: sys.n(),
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.n + self.h2.dim()
    }

    /// `M⁻¹ v`
    pub fn apply_inverse(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let (v1, v2) = v.split_at(self.n);
        let (x1, x2) = match self.variant {
            Variant::Diagonal => (self.leading.solve(v1), self.h2.solve_h(v2)),
            Variant::Upper | Variant::InexactUpper => {
                let x2 = self.h2.solve_h(v2);
                let mut r1 = v1.to_vec();
                self.bt.matvec_add(-1.0, &x2, &mut r1);
                (self.leading.solve(&r1), x2)
            }
            Variant::Lower => {
                let x1 = self.leading.solve(v1);
                let mut r2 = v2.to_vec();
                self.b.matvec_add(-1.0, &x1, &mut r2);
                (x1, self.h2.solve_h(&r2))
            }
        };
        let mut x = x1;
        x.extend(x2);
        x
    }

    /// `M v`
    pub fn apply_forward(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        let (v1, v2) = v.split_at(self.n);
        let mut y1 = match &self.leading {
            LeadingSolve::Exact(_) => self.f.matvec(v1),
            LeadingSolve::Sweeps(p) => {
                // P1 is only available through its inverse; invert densely.
                let pinv = materialize(self.n, self.n, |x| p.apply(x));
                crate::linalg::lu::lu_solve(&pinv, v1).expect("sweep operator is nonsingular")
            }
        };
        let mut y2 = self.h2_matrix.matvec(v2);
        match self.variant {
            Variant::Diagonal => {}
            Variant::Upper | Variant::InexactUpper => self.bt.matvec_add(1.0, v2, &mut y1),
            Variant::Lower => self.b.matvec_add(1.0, v1, &mut y2),
        }
        y1.extend(y2);
        y1
    }

    /// Dense `M`.
    pub fn materialize(&self) -> Matrix {
        let d = self.dim();
        if let LeadingSolve::Sweeps(p) = &self.leading {
            let pinv = materialize(self.n, self.n, |x| p.apply(x));
            let p1 = DenseLu::new(&pinv).expect("sweep operator is nonsingular").inverse();
            let mut m = materialize(d, d, |x| {
                let mut y = vec![0.0; self.n];
                y.extend(self.h2_matrix.matvec(&x[self.n..]));
                self.bt.matvec_add(1.0, &x[self.n..], &mut y[..self.n]);
                y
            });
            m.view_mut((0, 0), (self.n, self.n)).copy_from(&p1);
            return m;
        }
        materialize(d, d, |x| self.apply_forward(x))
    }
}
