//! SPD-weighted vector spaces.

use std::sync::Arc;

use crate::error::{check_dim, Error, Result};
use crate::linalg::band::SpdFactor;
use crate::linalg::dense::{asymmetry, dot, Matrix};
use crate::linalg::sparse::CsrMatrix;

/// Default relative symmetry tolerance for SPD inputs.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
enum Kind {
    Identity,
    Factor(Arc<SpdFactor>),
    Block(Vec<WeightedSpace>),
}

/// A vector space with the inner product `⟨u, v⟩_H = uᵀ H v`.
///
/// The space exposes the coordinate transform `T` with `‖x‖_H = ‖T x‖₂`.
/// For `H = Pᵀ L Lᵀ P` this is `T = Lᵀ P`; for the inverse space (norm
/// matrix `H⁻¹`) it is `T = L⁻¹ P`.
#[derive(Debug, Clone)]
pub struct WeightedSpace {
    kind: Kind,
    inverse: bool,
    dim: usize,
}

/// Factors an SPD matrix into a weighted space.
pub fn factor_spd(h: &Matrix) -> Result<WeightedSpace> {
    factor_spd_with_tol(h, SYMMETRY_TOL)
}

pub fn factor_spd_with_tol(h: &Matrix, sym_tol: f64) -> Result<WeightedSpace> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            found: h.ncols(),
        });
    }
    crate::linalg::dense::check_finite(h)?;
    let asym = asymmetry(h);
    if asym > sym_tol {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(WeightedSpace::from_factor(SpdFactor::from_dense(h)?))
}

/// `uᵀ H v`, evaluated through the factor as `(T u)·(T v)`.
pub fn weighted_inner(u: &[f64], v: &[f64], s: &WeightedSpace) -> Result<f64> {
    check_dim(s.dim(), u.len())?;
    check_dim(s.dim(), v.len())?;
    Ok(s.inner(u, v))
}

impl WeightedSpace {
    pub fn euclidean(dim: usize) -> Self {
        Self {
            kind: Kind::Identity,
            inverse: false,
            dim,
        }
    }

    pub fn from_factor(f: SpdFactor) -> Self {
        let dim = f.dim();
        Self {
            kind: Kind::Factor(Arc::new(f)),
            inverse: false,
            dim,
        }
    }

    /// Factors a sparse SPD matrix, reordering for a narrow band.
    pub fn from_sparse(h: &CsrMatrix) -> Result<Self> {
        let asym = h.add_scaled(-1.0, &h.transpose())?.frobenius_norm();
        let scale = h.frobenius_norm();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotSymmetric {
                asymmetry: asym / scale,
            });
        }
        Ok(Self::from_factor(SpdFactor::from_csr(h, true)?))
    }

    /// Direct sum of spaces; the norm matrix is block diagonal.
    pub fn block_diag(blocks: Vec<WeightedSpace>) -> Self {
        let dim = blocks.iter().map(|b| b.dim).sum();
        Self {
            kind: Kind::Block(blocks),
            inverse: false,
            dim,
        }
    }

    /// The space whose norm matrix is `H⁻¹`.
    pub fn inverse(&self) -> Self {
        match &self.kind {
            Kind::Block(bs) => Self {
                kind: Kind::Block(bs.iter().map(|b| b.inverse()).collect()),
                inverse: false,
                dim: self.dim,
            },
            k => Self {
                kind: k.clone(),
                inverse: !self.inverse,
                dim: self.dim,
            },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        match &self.kind {
            Kind::Identity => true,
            Kind::Factor(_) => false,
            Kind::Block(bs) => bs.iter().all(|b| b.is_euclidean()),
        }
    }

    fn blockwise(&self, bs: &[WeightedSpace], x: &[f64], f: impl Fn(&WeightedSpace, &[f64]) -> Vec<f64>) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim);
        let mut off = 0;
        for b in bs {
            out.extend(f(b, &x[off..off + b.dim]));
            off += b.dim;
        }
        out
    }

    /// `T x`
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Identity => x.to_vec(),
            Kind::Factor(f) if !self.inverse => f.lt_p(x),
            Kind::Factor(f) => f.l_inv_p(x),
            Kind::Block(bs) => self.blockwise(bs, x, |b, v| b.transform(v)),
        }
    }

    /// `T⁻¹ y`
    pub fn inv_transform(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.dim);
        match &self.kind {
            Kind::Identity => y.to_vec(),
            Kind::Factor(f) if !self.inverse => f.pt_lt_inv(y),
            Kind::Factor(f) => f.pt_l(y),
            Kind::Block(bs) => self.blockwise(bs, y, |b, v| b.inv_transform(v)),
        }
    }

    /// `Tᵀ y`
    pub fn transform_t(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.dim);
        match &self.kind {
            Kind::Identity => y.to_vec(),
            Kind::Factor(f) if !self.inverse => f.pt_l(y),
            Kind::Factor(f) => f.pt_lt_inv(y),
            Kind::Block(bs) => self.blockwise(bs, y, |b, v| b.transform_t(v)),
        }
    }

    /// `T⁻ᵀ x`
    pub fn inv_transform_t(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        match &self.kind {
            Kind::Identity => x.to_vec(),
            Kind::Factor(f) if !self.inverse => f.l_inv_p(x),
            Kind::Factor(f) => f.lt_p(x),
            Kind::Block(bs) => self.blockwise(bs, x, |b, v| b.inv_transform_t(v)),
        }
    }

    /// `H x` (the norm matrix applied to `x`).
    pub fn apply_h(&self, x: &[f64]) -> Vec<f64> {
        self.transform_t(&self.transform(x))
    }

    /// `H⁻¹ b`
    pub fn solve_h(&self, b: &[f64]) -> Vec<f64> {
        self.inv_transform(&self.inv_transform_t(b))
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(&self.transform(u), &self.transform(v))
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        let t = self.transform(u);
        dot(&t, &t).sqrt()
    }

    /// Dense norm matrix `H`.
    pub fn matrix(&self) -> Matrix {
        crate::linalg::dense::materialize(self.dim, self.dim, |x| self.apply_h(x))
    }

    /// Dense transform `T`.
    pub fn transform_matrix(&self) -> Matrix {
        crate::linalg::dense::materialize(self.dim, self.dim, |x| self.transform(x))
    }

    /// Similarity transform `T A T⁻¹` of a dense operator on this space.
    pub fn similarity(&self, a: &Matrix) -> Matrix {
        assert_eq!(a.shape(), (self.dim, self.dim));
        if self.is_euclidean() {
            return a.clone();
        }
        let n = self.dim;
        let mut right = Matrix::zeros(n, n);
        // Columns of A T⁻¹: apply T⁻¹ to unit vectors, then A.
        let tinv = crate::linalg::dense::materialize(n, n, |x| self.inv_transform(x));
        let atinv = a * tinv;
        for j in 0..n {
            let col: Vec<f64> = atinv.column(j).iter().copied().collect();
            right.column_mut(j).copy_from_slice(&self.transform(&col));
        }
        right
    }
}
