//! Banded Cholesky and LU factorizations with an optional bandwidth-reducing
//! symmetric permutation.
//!
//! Both factorizations work on `P A Pᵀ` where `perm[new] = old` describes `P`,
//! i.e. `(P x)[new] = x[perm[new]]`.

use crate::error::{Error, Result};
use crate::linalg::dense::Matrix;
use crate::linalg::sparse::CsrMatrix;

fn choose_ordering(a: &CsrMatrix, reorder: bool) -> (Vec<usize>, CsrMatrix) {
    let n = a.nrows();
    let natural: Vec<usize> = (0..n).collect();
    if !reorder || n < 3 {
        return (natural, a.clone());
    }
    let perm = a.rcm_ordering();
    let permuted = a.permute_symmetric(&perm);
    let (kl0, ku0) = a.bandwidths();
    let (kl1, ku1) = permuted.bandwidths();
    if kl1 + ku1 < kl0 + ku0 {
        (perm, permuted)
    } else {
        (natural, a.clone())
    }
}

fn permute(perm: &[usize], x: &[f64]) -> Vec<f64> {
    perm.iter().map(|&old| x[old]).collect()
}

fn unpermute(perm: &[usize], y: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; y.len()];
    for (new, &old) in perm.iter().enumerate() {
        x[old] = y[new];
    }
    x
}

/// Cholesky factorization `P H Pᵀ = L Lᵀ` stored in band form.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    n: usize,
    kd: usize,
    // Row i holds L[i, i-kd..=i] at offsets 0..=kd.
    l: Vec<f64>,
    perm: Vec<usize>,
}

impl SpdFactor {
    /// Factors a symmetric positive definite sparse matrix. Only the lower
    /// triangle is read. With `reorder`, a reverse Cuthill–McKee permutation
    /// is used when it narrows the band.
    pub fn from_csr(a: &CsrMatrix, reorder: bool) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let (perm, pa) = choose_ordering(a, reorder);
        let (kl, ku) = pa.bandwidths();
        let kd = kl.max(ku);
        let n = pa.nrows();
        let w = kd + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in pa.row(i) {
                if j <= i {
                    l[i * w + j + kd - i] = v;
                }
            }
        }
        Self::factor_in_place(n, kd, l, perm)
    }

    /// Factors a dense symmetric positive definite matrix, keeping the natural
    /// ordering. The band width is the actual extent of the nonzero entries.
    pub fn from_dense(h: &Matrix) -> Result<Self> {
        let n = h.nrows();
        let mut kd = 0;
        for j in 0..n {
            for i in j..n {
                if h[(i, j)] != 0.0 {
                    kd = kd.max(i - j);
                }
            }
        }
        let w = kd + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            for j in i.saturating_sub(kd)..=i {
                l[i * w + j + kd - i] = h[(i, j)];
            }
        }
        Self::factor_in_place(n, kd, l, (0..n).collect())
    }

    fn factor_in_place(n: usize, kd: usize, mut l: Vec<f64>, perm: Vec<usize>) -> Result<Self> {
        let w = kd + 1;
        for i in 0..n {
            let i0 = i.saturating_sub(kd);
            for j in i0..=i {
                let j0 = j.saturating_sub(kd).max(i0);
                let mut s = l[i * w + j + kd - i];
                for k in j0..j {
                    s -= l[i * w + k + kd - i] * l[j * w + k + kd - j];
                }
                if j == i {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite {
                            index: perm[i],
                            pivot: s,
                        });
                    }
                    l[i * w + kd] = s.sqrt();
                } else {
                    l[i * w + j + kd - i] = s / l[j * w + kd];
                }
            }
        }
        Ok(Self { n, kd, l, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.kd
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.kd + 1) + j + self.kd - i]
    }

    /// The lower-triangular factor in the permuted ordering, as a dense matrix.
    pub fn lower_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.kd)..=i {
                m[(i, j)] = self.at(i, j);
            }
        }
        m
    }

    fn mul_l(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                (i.saturating_sub(self.kd)..=i)
                    .map(|j| self.at(i, j) * x[j])
                    .sum()
            })
            .collect()
    }

    fn mul_lt(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.kd)..=i {
                y[j] += self.at(i, j) * x[i];
            }
        }
        y
    }

    fn solve_l_in_place(&self, y: &mut [f64]) {
        for i in 0..self.n {
            let mut s = y[i];
            for j in i.saturating_sub(self.kd)..i {
                s -= self.at(i, j) * y[j];
            }
            y[i] = s / self.at(i, i);
        }
    }

    fn solve_lt_in_place(&self, y: &mut [f64]) {
        for i in (0..self.n).rev() {
            let xi = y[i] / self.at(i, i);
            y[i] = xi;
            for j in i.saturating_sub(self.kd)..i {
                y[j] -= self.at(i, j) * xi;
            }
        }
    }

    /// `Lᵀ P x`
    pub fn lt_p(&self, x: &[f64]) -> Vec<f64> {
        self.mul_lt(&permute(&self.perm, x))
    }

    /// `Pᵀ L y`
    pub fn pt_l(&self, y: &[f64]) -> Vec<f64> {
        unpermute(&self.perm, &self.mul_l(y))
    }

    /// `Pᵀ L⁻ᵀ y`
    pub fn pt_lt_inv(&self, y: &[f64]) -> Vec<f64> {
        let mut z = y.to_vec();
        self.solve_lt_in_place(&mut z);
        unpermute(&self.perm, &z)
    }

    /// `L⁻¹ P x`
    pub fn l_inv_p(&self, x: &[f64]) -> Vec<f64> {
        let mut z = permute(&self.perm, x);
        self.solve_l_in_place(&mut z);
        z
    }

    /// `H⁻¹ b`
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.pt_lt_inv(&self.l_inv_p(b))
    }

    /// `H x`
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        self.pt_l(&self.lt_p(x))
    }
}

/// LU factorization with partial pivoting of a banded matrix, `P A Pᵀ = Π L U`
/// in the LAPACK `gbtrf` sense.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    // Row k of U holds U[k, k..k+kl+ku] at offsets 0..=kl+ku.
    u: Vec<f64>,
    // Row k holds the multipliers for rows k+1..=k+kl.
    lmul: Vec<f64>,
    piv: Vec<usize>,
    perm: Vec<usize>,
}

impl BandLu {
    pub fn from_csr(a: &CsrMatrix, reorder: bool) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        let (perm, pa) = choose_ordering(a, reorder);
        let (kl, ku) = pa.bandwidths();
        let n = pa.nrows();
        let scale = pa.max_abs();
        // Working rows: row i stores columns i-kl ..= i+kl+ku at offsets 0..w.
        let w = 2 * kl + ku + 1;
        let mut work = vec![0.0; n * w];
        for i in 0..n {
            for (j, v) in pa.row(i) {
                work[i * w + j + kl - i] = v;
            }
        }
        let idx = |i: usize, j: usize| i * w + j + kl - i;
        let wu = kl + ku + 1;
        let mut u = vec![0.0; n * wu];
        let mut lmul = vec![0.0; n * kl.max(1)];
        let mut piv = vec![0; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = work[idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = work[idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= 1e-14 * scale || best == 0.0 {
                return Err(Error::Singular { index: perm[k] });
            }
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    work.swap(idx(k, j), idx(p, j));
                }
            }
            let pivot = work[idx(k, k)];
            for i in k + 1..=last_row {
                let m = work[idx(i, k)] / pivot;
                lmul[k * kl.max(1) + i - k - 1] = m;
                if m != 0.0 {
                    for j in k + 1..=last_col {
                        work[idx(i, j)] -= m * work[idx(k, j)];
                    }
                }
            }
            for j in k..=last_col {
                u[k * wu + j - k] = work[idx(k, j)];
            }
        }
        Ok(Self {
            n,
            kl,
            ku,
            u,
            lmul,
            piv,
            perm,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn uat(&self, k: usize, j: usize) -> f64 {
        self.u[k * (self.kl + self.ku + 1) + j - k]
    }

    #[inline]
    fn lat(&self, k: usize, i: usize) -> f64 {
        self.lmul[k * self.kl.max(1) + i - k - 1]
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut y = permute(&self.perm, b);
        for k in 0..n {
            y.swap(k, self.piv[k]);
            let yk = y[k];
            if yk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n - 1) {
                    y[i] -= self.lat(k, i) * yk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.uat(k, j) * y[j];
            }
            y[k] = s / self.uat(k, k);
        }
        unpermute(&self.perm, &y)
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let mut y = permute(&self.perm, b);
        for k in 0..n {
            let yk = y[k] / self.uat(k, k);
            y[k] = yk;
            if yk != 0.0 {
                for j in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                    y[j] -= self.uat(k, j) * yk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                s -= self.lat(k, i) * y[i];
            }
            y[k] = s;
            y.swap(k, self.piv[k]);
        }
        unpermute(&self.perm, &y)
    }
}
