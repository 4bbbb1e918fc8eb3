//! Saddle-point systems `K = [[F, Bᵀ], [B, 0]]`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::band::BandLu;
use crate::linalg::dense::{dot, norm2, Matrix};
use crate::linalg::lanczos::{extreme_eigenpair, Extreme, LanczosOptions};
use crate::linalg::sparse::CsrMatrix;
use crate::linalg::space::WeightedSpace;

/// Number of random directions used for the positive-real spot check.
const SPOT_CHECKS: usize = 200;
/// Smallest accepted ratio `σ_min / σ_max` of the transformed constraint block.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemMeta {
    pub generator: String,
    pub nu: f64,
    pub grid: Option<usize>,
    /// Generator-specific parameters, sorted by name.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl SystemMeta {
    pub fn new(generator: &str, nu: f64, grid: Option<usize>) -> Self {
        Self {
            generator: generator.to_string(),
            nu,
            grid,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }
}

/// Extreme singular values of `B` between the `H1` and `H2⁻¹` norms, i.e.
/// `C2 = σ_min` and `C1 = σ_max` of `T_{H2⁻¹} B T_{H1}⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintBounds {
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone)]
pub struct SaddlePointSystem {
    f: CsrMatrix,
    b: CsrMatrix,
    bt: CsrMatrix,
    h1: CsrMatrix,
    n_skew: CsrMatrix,
    h2: CsrMatrix,
    h1_space: WeightedSpace,
    h2_space: WeightedSpace,
    bounds: ConstraintBounds,
    pub meta: SystemMeta,
    pub rhs: Option<Vec<f64>>,
}

/// Builds a saddle-point system, splitting `F = H1 + N` with `H1 = (F + Fᵀ)/2`.
pub fn assemble(f: &CsrMatrix, b: &CsrMatrix, h2: &CsrMatrix, meta: SystemMeta) -> Result<SaddlePointSystem> {
    SaddlePointSystem::new(f, b, h2, meta)
}

impl SaddlePointSystem {
    pub fn new(f: &CsrMatrix, b: &CsrMatrix, h2: &CsrMatrix, meta: SystemMeta) -> Result<Self> {
        let n = f.nrows();
        if f.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: f.ncols(),
            });
        }
        if b.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.ncols(),
            });
        }
        let m = b.nrows();
        if h2.nrows() != m || h2.ncols() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: h2.nrows(),
            });
        }
        if m == 0 || m > n {
            return Err(Error::RankDeficientB { sigma_min: 0.0 });
        }

        let h2_space = WeightedSpace::from_sparse(h2).map_err(|e| Error::H2NotSpd(e.to_string()))?;

        let ft = f.transpose();
        let h1 = f.add_scaled(1.0, &ft)?.scaled(0.5);
        let n_skew = f.add_scaled(-1.0, &ft)?.scaled(0.5);
        let f = h1.add_scaled(1.0, &n_skew)?;

        let mut rng = ChaCha8Rng::seed_from_u64(0x0f0f);
        let mut min_q = f64::INFINITY;
        for _ in 0..SPOT_CHECKS {
            let mut u: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            let s = norm2(&u);
            u.iter_mut().for_each(|v| *v /= s);
            min_q = min_q.min(dot(&u, &f.matvec(&u)));
        }
        if !(min_q > 0.0) {
            return Err(Error::NotPositiveReal { value: min_q });
        }
        let h1_space = match WeightedSpace::from_sparse(&h1) {
            Ok(s) => s,
            Err(Error::NotPositiveDefinite { pivot, .. }) => return Err(Error::NotPositiveReal { value: pivot }),
            Err(e) => return Err(e),
        };

        let bt = b.transpose();
        let bounds = constraint_bounds(b, &bt, &h1_space, &h2_space);
        if !(bounds.c2 > RANK_TOL * bounds.c1) {
            return Err(Error::RankDeficientB { sigma_min: bounds.c2 });
        }
        Ok(Self {
            f,
            b: b.clone(),
            bt,
            h1,
            n_skew,
            h2: h2.clone(),
            h1_space,
            h2_space,
            bounds,
            meta,
            rhs: None,
        })
    }

    pub fn with_rhs(mut self, rhs: Vec<f64>) -> Result<Self> {
        crate::error::check_dim(self.dim(), rhs.len())?;
        self.rhs = Some(rhs);
        Ok(self)
    }

    /// Number of primal unknowns.
    pub fn n(&self) -> usize {
        self.f.nrows()
    }

    /// Number of constraints.
    pub fn m(&self) -> usize {
        self.b.nrows()
    }

    pub fn dim(&self) -> usize {
        self.n() + self.m()
    }

    pub fn f(&self) -> &CsrMatrix {
        &self.f
    }

    pub fn b(&self) -> &CsrMatrix {
        &self.b
    }

    pub fn bt(&self) -> &CsrMatrix {
        &self.bt
    }

    pub fn h1(&self) -> &CsrMatrix {
        &self.h1
    }

    /// Skew part `N = (F − Fᵀ)/2`.
    pub fn skew(&self) -> &CsrMatrix {
        &self.n_skew
    }

    pub fn h2(&self) -> &CsrMatrix {
        &self.h2
    }

    pub fn h1_space(&self) -> &WeightedSpace {
        &self.h1_space
    }

    pub fn h2_space(&self) -> &WeightedSpace {
        &self.h2_space
    }

    /// The block-diagonal space `H = diag(H1, H2)`.
    pub fn h_space(&self) -> WeightedSpace {
        WeightedSpace::block_diag(vec![self.h1_space.clone(), self.h2_space.clone()])
    }

    pub fn constraint_bounds(&self) -> ConstraintBounds {
        self.bounds
    }

    /// The full system matrix in sparse form.
    pub fn k(&self) -> CsrMatrix {
        CsrMatrix::block(&[vec![Some(&self.f), Some(&self.bt)], vec![Some(&self.b), None]])
            .expect("blocks are conformable")
    }

    pub fn k_dense(&self) -> Matrix {
        self.k().to_dense()
    }

    /// `K x`
    pub fn apply_k(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let (x1, x2) = x.split_at(n);
        let mut y1 = self.f.matvec(x1);
        self.bt.matvec_add(1.0, x2, &mut y1);
        let y2 = self.b.matvec(x1);
        y1.extend(y2);
        y1
    }

    /// Sparse LU of `F`.
    pub fn factor_f(&self) -> Result<BandLu> {
        BandLu::from_csr(&self.f, true)
    }

    /// Sparse LU of `K`.
    pub fn factor_k(&self) -> Result<BandLu> {
        BandLu::from_csr(&self.k(), true)
    }
}

fn constraint_bounds(
    b: &CsrMatrix,
    bt: &CsrMatrix,
    h1: &WeightedSpace,
    h2: &WeightedSpace,
) -> ConstraintBounds {
    let m = b.nrows();
    // Gram operator T_{H2}⁻ᵀ B H1⁻¹ Bᵀ T_{H2}⁻¹ of the transformed constraint block.
    let gram = |x: &[f64]| -> Vec<f64> {
        let y = bt.matvec(&h2.inv_transform(x));
        h2.inv_transform_t(&b.matvec(&h1.solve_h(&y)))
    };
    let opts = LanczosOptions {
        tol: 1e-10,
        max_steps: 5000,
        ..Default::default()
    };
    if m <= 200 {
        let g = crate::linalg::dense::materialize(m, m, gram);
        let g = crate::linalg::dense::sym_part(&g);
        let ev = g.symmetric_eigenvalues();
        return ConstraintBounds {
            c1: ev.max().max(0.0).sqrt(),
            c2: ev.min().max(0.0).sqrt(),
        };
    }
    let hi = extreme_eigenpair(m, &gram, Extreme::Largest, None, &opts);
    let lo = extreme_eigenpair(m, &gram, Extreme::Smallest, None, &opts);
    ConstraintBounds {
        c1: hi.value.max(0.0).sqrt(),
        c2: lo.value.max(0.0).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> SystemMeta {
        SystemMeta::new("test", 1.0, None)
    }

    #[test]
    fn symmetric_split() {
        let f = CsrMatrix::identity(2);
        let b = CsrMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let h2 = CsrMatrix::identity(1);
        let s = assemble(&f, &b, &h2, meta()).unwrap();
        assert_eq!(s.h1().to_dense(), Matrix::identity(2, 2));
        assert_eq!(s.skew().nnz(), 0);
    }

    #[test]
    fn hand_split() {
        let f = CsrMatrix::from_dense(&Matrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]));
        let b = CsrMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let s = assemble(&f, &b, &CsrMatrix::identity(1), meta()).unwrap();
        assert_eq!(s.h1().to_dense(), Matrix::identity(2, 2));
        assert_eq!(s.skew().to_dense(), Matrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
        assert_eq!(s.f().to_dense(), Matrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]));
        let k = s.k_dense();
        assert_eq!(k[(2, 0)], 1.0);
        assert_eq!(k[(0, 2)], 1.0);
        assert_eq!(k[(2, 2)], 0.0);
    }

    #[test]
    fn rejects_invalid_blocks() {
        let b = CsrMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap();
        let h2 = CsrMatrix::identity(1);
        let neg = CsrMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(assemble(&neg, &b, &h2, meta()), Err(Error::NotPositiveReal { .. })));
        let zero_b = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 2.0)]).unwrap();
        assert!(matches!(
            assemble(&CsrMatrix::identity(2), &zero_b, &CsrMatrix::identity(2), meta()),
            Err(Error::RankDeficientB { .. })
        ));
        let bad_h2 = CsrMatrix::from_diagonal(&[-1.0]);
        assert!(matches!(
            assemble(&CsrMatrix::identity(2), &b, &bad_h2, meta()),
            Err(Error::H2NotSpd(_))
        ));
    }

    #[test]
    fn constraint_constants_for_identity_weights() {
        let b = CsrMatrix::from_triplets(2, 3, &[(0, 0, 2.0), (1, 1, 0.5)]).unwrap();
        let s = assemble(&CsrMatrix::identity(3), &b, &CsrMatrix::identity(2), meta()).unwrap();
        let c = s.constraint_bounds();
        assert!((c.c1 - 2.0).abs() < 1e-12);
        assert!((c.c2 - 0.5).abs() < 1e-12);
    }
}
