use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;

/// `A = A₋₁ ⊕ A₊₁` with `n × n` upper-bidiagonal Toeplitz blocks: diagonal
/// `−1` with superdiagonal `1/4`, and diagonal `2` with superdiagonal `1.2`.
pub fn toeplitz_example(n: usize) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("block size {n} must be at least 2")));
    }
    let mut a = Matrix::zeros(2 * n, 2 * n);
    for (off, d, s) in [(0, -1.0, 0.25), (n, 2.0, 1.2)] {
        for i in 0..n {
            a[(off + i, off + i)] = d;
            if i + 1 < n {
                a[(off + i, off + i + 1)] = s;
            }
        }
    }
    Ok(a)
}
