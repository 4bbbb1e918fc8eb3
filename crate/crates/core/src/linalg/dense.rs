//! Dense matrix helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real matrix.
pub type Matrix = DMatrix<f64>;

/// Builds a matrix from row-major entries, rejecting empty shapes and
/// non-finite values.
pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Matrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidMatrix(format!("shape {rows}x{cols} is empty")));
    }
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch {
            expected: rows * cols,
            found: entries.len(),
        });
    }
    let m = Matrix::from_row_slice(rows, cols, entries);
    check_finite(&m)?;
    Ok(m)
}

pub fn check_finite(m: &Matrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidMatrix("empty matrix".into()));
    }
    match m.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(k) => Err(Error::InvalidMatrix(format!(
            "non-finite entry at ({}, {})",
            k % m.nrows(),
            k / m.nrows()
        ))),
    }
}

/// Relative asymmetry `‖M − Mᵀ‖_F / ‖M‖_F` (zero for the zero matrix).
pub fn asymmetry(m: &Matrix) -> f64 {
    assert_eq!(m.nrows(), m.ncols(), "asymmetry of a non-square matrix");
    let scale = m.norm();
    if scale == 0.0 {
        return 0.0;
    }
    let n = m.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            let d = m[(i, j)] - m[(j, i)];
            s += d * d;
        }
    }
    s.sqrt() / scale
}

pub fn sym_part(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

pub fn skew_part(m: &Matrix) -> Matrix {
    (m - m.transpose()) * 0.5
}

pub fn matvec(m: &Matrix, x: &[f64]) -> Vec<f64> {
    assert_eq!(m.ncols(), x.len());
    let y = m * DVector::from_column_slice(x);
    y.as_slice().to_vec()
}

pub fn matvec_t(m: &Matrix, x: &[f64]) -> Vec<f64> {
    assert_eq!(m.nrows(), x.len());
    let y = m.tr_mul(&DVector::from_column_slice(x));
    y.as_slice().to_vec()
}

/// Block matrix `[[a, b], [c, d]]`.
pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
    let (n, m) = (a.nrows(), d.nrows());
    assert_eq!(a.ncols(), n);
    assert_eq!(b.shape(), (n, m));
    assert_eq!(c.shape(), (m, n));
    assert_eq!(d.ncols(), m);
    let mut k = Matrix::zeros(n + m, n + m);
    k.view_mut((0, 0), (n, n)).copy_from(a);
    k.view_mut((0, n), (n, m)).copy_from(b);
    k.view_mut((n, 0), (m, n)).copy_from(c);
    k.view_mut((n, n), (m, m)).copy_from(d);
    k
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    for v in x {
        *v *= alpha;
    }
}

/// Applies a vector map to every column of the identity and collects the
/// results as columns.
pub fn materialize(n_in: usize, n_out: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Matrix {
    let mut m = Matrix::zeros(n_out, n_in);
    let mut e = vec![0.0; n_in];
    for j in 0..n_in {
        e[j] = 1.0;
        let col = f(&e);
        e[j] = 0.0;
        m.column_mut(j).copy_from_slice(&col);
    }
    m
}
