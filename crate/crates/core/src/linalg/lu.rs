//! Dense LU with partial pivoting.

use nalgebra::{DVector, Dyn, LU};

use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;

/// LU factorizations of `M` and `Mᵀ`, so both `M x = b` and `Mᵀ x = b` can be
/// solved.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: LU<f64, Dyn, Dyn>,
    lu_t: LU<f64, Dyn, Dyn>,
    n: usize,
}

fn check_pivots(lu: &LU<f64, Dyn, Dyn>, scale: f64) -> Result<()> {
    let u = lu.u();
    for i in 0..u.nrows() {
        let p = u[(i, i)];
        if !p.is_finite() || p.abs() <= 1e-14 * scale {
            return Err(Error::Singular { index: i });
        }
    }
    Ok(())
}

impl DenseLu {
    pub fn new(m: &Matrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let scale = m.amax();
        if scale == 0.0 {
            return Err(Error::Singular { index: 0 });
        }
        let lu = m.clone().lu();
        check_pivots(&lu, scale)?;
        let lu_t = m.transpose().lu();
        check_pivots(&lu_t, scale)?;
        Ok(Self {
            lu,
            lu_t,
            n: m.nrows(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = DVector::from_column_slice(b);
        self.lu.solve_mut(&mut x);
        x.as_slice().to_vec()
    }

    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = DVector::from_column_slice(b);
        self.lu_t.solve_mut(&mut x);
        x.as_slice().to_vec()
    }

    pub fn inverse(&self) -> Matrix {
        self.lu.try_inverse().expect("pivots were checked nonzero")
    }
}

/// Solves `M x = rhs` by LU with partial pivoting.
pub fn lu_solve(m: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if rhs.len() != m.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: rhs.len(),
        });
    }
    let scale = m.amax();
    if scale == 0.0 {
        return Err(Error::Singular { index: 0 });
    }
    let lu = m.clone().lu();
    check_pivots(&lu, scale)?;
    let mut x = DVector::from_column_slice(rhs);
    lu.solve_mut(&mut x);
    Ok(x.as_slice().to_vec())
}
