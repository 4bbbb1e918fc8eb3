//! Marker-and-cell (staggered) finite differences on the unit square.
//!
//! With `N` cells per side and `h = 1/N`:
//! - `u` lives at `(ih, (j+½)h)` for `i = 1..N−1`, `j = 0..N−1`;
//! - `v` lives at `((i+½)h, jh)` for `i = 0..N−1`, `j = 1..N−1`;
//! - `p` lives at cell centres `((i+½)h, (j+½)h)`.
//!
//! All operators carry the finite-element scaling: the Laplacian is
//! `h²(−Δ_h)` (stencil 4/−1), the divergence is `−h²·div` (entries `±h`).

use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::problems::grid::WindField;

/// Largest accepted discrete divergence per unit area.
pub const DIVERGENCE_TOL: f64 = 1e-10;

pub(crate) type Triplets = Vec<(usize, usize, f64)>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Mac {
    pub cells: usize,
    pub h: f64,
}

impl Mac {
    pub fn new(cells: usize) -> Self {
        Self {
            cells,
            h: 1.0 / cells as f64,
        }
    }

    pub fn nu(&self) -> usize {
        self.cells * (self.cells - 1)
    }

    pub fn n_velocity(&self) -> usize {
        2 * self.nu()
    }

    pub fn n_pressure(&self) -> usize {
        self.cells * self.cells
    }

    /// Index of `u(i, j)`, `1 ≤ i ≤ N−1`.
    pub fn u(&self, i: usize, j: usize) -> usize {
        j * (self.cells - 1) + (i - 1)
    }

    /// Index of `v(i, j)`, `1 ≤ j ≤ N−1`.
    pub fn v(&self, i: usize, j: usize) -> usize {
        self.nu() + (j - 1) * self.cells + i
    }

    pub fn p(&self, i: usize, j: usize) -> usize {
        j * self.cells + i
    }

    /// Coordinate of the half-index `k` (position `k·h/2`).
    fn at(&self, k: usize) -> f64 {
        k as f64 * 0.5 * self.h
    }

    /// Vector Laplacian `h²(−Δ_h)` with homogeneous Dirichlet walls. Walls
    /// through a velocity node drop the neighbour, tangential walls use a
    /// reflected ghost value.
    pub fn laplacian(&self) -> Triplets {
        let n = self.cells;
        let mut t = Vec::with_capacity(5 * self.n_velocity());
        for j in 0..n {
            for i in 1..n {
                let k = self.u(i, j);
                let mut diag = 4.0;
                if i > 1 {
                    t.push((k, self.u(i - 1, j), -1.0));
                }
                if i + 1 < n {
                    t.push((k, self.u(i + 1, j), -1.0));
                }
                if j > 0 {
                    t.push((k, self.u(i, j - 1), -1.0));
                } else {
                    diag += 1.0;
                }
                if j + 1 < n {
                    t.push((k, self.u(i, j + 1), -1.0));
                } else {
                    diag += 1.0;
                }
                t.push((k, k, diag));
            }
        }
        for j in 1..n {
            for i in 0..n {
                let k = self.v(i, j);
                let mut diag = 4.0;
                if i > 0 {
                    t.push((k, self.v(i - 1, j), -1.0));
                } else {
                    diag += 1.0;
                }
                if i + 1 < n {
                    t.push((k, self.v(i + 1, j), -1.0));
                } else {
                    diag += 1.0;
                }
                if j > 1 {
                    t.push((k, self.v(i, j - 1), -1.0));
                }
                if j + 1 < n {
                    t.push((k, self.v(i, j + 1), -1.0));
                }
                t.push((k, k, diag));
            }
        }
        t
    }

    /// `−h²·div` as an `N² × n_velocity` matrix. Its rows sum to zero, so the
    /// constant pressure spans the null space of its transpose.
    pub fn divergence(&self) -> CsrMatrix {
        let n = self.cells;
        let h = self.h;
        let mut t = Vec::with_capacity(4 * self.n_pressure());
        for j in 0..n {
            for i in 0..n {
                let r = self.p(i, j);
                if i + 1 < n {
                    t.push((r, self.u(i + 1, j), -h));
                }
                if i > 0 {
                    t.push((r, self.u(i, j), h));
                }
                if j + 1 < n {
                    t.push((r, self.v(i, j + 1), -h));
                }
                if j > 0 {
                    t.push((r, self.v(i, j), h));
                }
            }
        }
        CsrMatrix::from_triplets(self.n_pressure(), self.n_velocity(), &t).expect("indices in range")
    }

    /// Centred convection `h²(b·∇)` built from face fluxes. Each face
    /// contributes `Φ/2` to the neighbour entry, which makes the matrix
    /// exactly skew-symmetric once every control volume is divergence free.
    pub fn convection(&self, wind: &WindField) -> Result<CsrMatrix> {
        self.check_wind(wind)?;
        let n = self.cells;
        let mut t = Vec::with_capacity(4 * self.n_velocity());
        for j in 0..n {
            for i in 1..n {
                let k = self.u(i, j);
                let [e, w, no, so] = wind.box_fluxes(self.at(2 * i - 1), self.at(2 * i + 1), self.at(2 * j), self.at(2 * j + 2));
                if i + 1 < n {
                    t.push((k, self.u(i + 1, j), 0.5 * e));
                }
                if i > 1 {
                    t.push((k, self.u(i - 1, j), 0.5 * w));
                }
                if j + 1 < n {
                    t.push((k, self.u(i, j + 1), 0.5 * no));
                }
                if j > 0 {
                    t.push((k, self.u(i, j - 1), 0.5 * so));
                }
            }
        }
        for j in 1..n {
            for i in 0..n {
                let k = self.v(i, j);
                let [e, w, no, so] = wind.box_fluxes(self.at(2 * i), self.at(2 * i + 2), self.at(2 * j - 1), self.at(2 * j + 1));
                if i + 1 < n {
                    t.push((k, self.v(i + 1, j), 0.5 * e));
                }
                if i > 0 {
                    t.push((k, self.v(i - 1, j), 0.5 * w));
                }
                if j + 1 < n {
                    t.push((k, self.v(i, j + 1), 0.5 * no));
                }
                if j > 1 {
                    t.push((k, self.v(i, j - 1), 0.5 * so));
                }
            }
        }
        CsrMatrix::from_triplets(self.n_velocity(), self.n_velocity(), &t)
    }

    /// Rejects winds whose discrete divergence exceeds [`DIVERGENCE_TOL`] on
    /// any control volume, or which cross the walls.
    fn check_wind(&self, wind: &WindField) -> Result<()> {
        let n = self.cells;
        let area = self.h * self.h;
        let mut worst: f64 = 0.0;
        let mut wall: f64 = 0.0;
        let mut visit = |xw: usize, xe: usize, ys: usize, yn: usize| {
            let f = wind.box_fluxes(self.at(xw), self.at(xe), self.at(ys), self.at(yn));
            worst = worst.max(f.iter().sum::<f64>().abs() / area);
            if xw == 0 {
                wall = wall.max(f[1].abs());
            }
            if xe == 2 * n {
                wall = wall.max(f[0].abs());
            }
            if yn == 2 * n {
                wall = wall.max(f[2].abs());
            }
            if ys == 0 {
                wall = wall.max(f[3].abs());
            }
        };
        for j in 0..n {
            for i in 0..n {
                visit(2 * i, 2 * i + 2, 2 * j, 2 * j + 2);
            }
        }
        for j in 0..n {
            for i in 1..n {
                visit(2 * i - 1, 2 * i + 1, 2 * j, 2 * j + 2);
            }
        }
        for j in 1..n {
            for i in 0..n {
                visit(2 * i, 2 * i + 2, 2 * j - 1, 2 * j + 1);
            }
        }
        if !(worst <= DIVERGENCE_TOL) {
            return Err(Error::WindNotDivergenceFree { divergence: worst });
        }
        if !(wall <= DIVERGENCE_TOL * area) {
            return Err(Error::InvalidParams(format!("wind crosses the boundary (flux {wall:e})")));
        }
        Ok(())
    }
}

/// Restricts a constraint block whose rows sum to zero to the complement of
/// the constant vector: `B' = Q B` where `Q` holds rows `1..m` of the
/// Householder reflector sending `e₀` to `1/√m`. `Q` has orthonormal rows,
/// so `H₂ = h²I` carries over unchanged.
pub(crate) fn remove_mean(b: &CsrMatrix) -> CsrMatrix {
    let m = b.nrows();
    let sm = (m as f64).sqrt();
    let c = 1.0 / (sm - 1.0);
    let row0: Vec<(usize, f64)> = b.row(0).collect();
    let mut t = Vec::with_capacity(b.nnz() + (m - 1) * row0.len());
    for i in 1..m {
        t.extend(b.row(i).map(|(j, v)| (i - 1, j, v)));
        t.extend(row0.iter().map(|&(j, v)| (i - 1, j, c * v)));
    }
    CsrMatrix::from_triplets(m - 1, b.ncols(), &t).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::{asymmetry, Matrix};

    #[test]
    fn laplacian_is_symmetric_with_wall_diagonals() {
        let g = Mac::new(4);
        let a = CsrMatrix::from_triplets(g.n_velocity(), g.n_velocity(), &g.laplacian()).unwrap();
        assert_eq!(asymmetry(&a.to_dense()), 0.0);
        // bottom-left u touches the bottom wall (ghost) and the left wall
        assert_eq!(a.get(g.u(1, 0), g.u(1, 0)), 5.0);
        assert_eq!(a.get(g.u(2, 1), g.u(2, 1)), 4.0);
        assert!(a.to_dense().symmetric_eigenvalues().min() > 0.0);
    }

    #[test]
    fn divergence_annihilates_constants() {
        let g = Mac::new(5);
        let b = g.divergence();
        let ones = vec![1.0; g.n_pressure()];
        assert!(b.matvec_t(&ones).iter().all(|v| v.abs() < 1e-15));
        // exactly a one-dimensional left null space
        let sv = b.to_dense().singular_values();
        let tiny = sv.iter().filter(|s| **s < 1e-10).count();
        assert_eq!(tiny, 1);
    }

    #[test]
    fn mean_removal_is_orthogonal_restriction() {
        let g = Mac::new(4);
        let b = g.divergence();
        let r = remove_mean(&b).to_dense();
        let bd = b.to_dense();
        // Gram matrices agree on the complement of the constants.
        let m = bd.nrows() as f64;
        let proj = Matrix::identity(bd.nrows(), bd.nrows()) - Matrix::from_element(bd.nrows(), bd.nrows(), 1.0 / m);
        let lhs = r.transpose() * &r;
        let rhs = bd.transpose() * proj * &bd;
        assert!((lhs - rhs).norm() < 1e-13);
        assert!(r.singular_values().min() > 1e-10);
    }

    #[test]
    fn convection_is_skew() {
        let g = Mac::new(6);
        let n = g.convection(&WindField::recirculating(10.0)).unwrap().to_dense();
        assert!((&n + n.transpose()).norm() == 0.0);
        assert!(n.norm() > 0.0);
    }

    #[test]
    fn rejects_compressible_wind() {
        let g = Mac::new(4);
        let w = WindField::velocity("source", |x, _| x, |_, y| y);
        assert!(matches!(g.convection(&w), Err(Error::WindNotDivergenceFree { .. })));
        let through = WindField::velocity("uniform", |_, _| 1.0, |_, _| 0.0);
        assert!(matches!(g.convection(&through), Err(Error::InvalidParams(_))));
    }
}
