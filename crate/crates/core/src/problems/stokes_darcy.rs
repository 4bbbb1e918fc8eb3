//! Finite-difference Stokes–Darcy analog on two stacked unit squares.
//!
//! Stokes velocity lives on `[0,1]²` (MAC grid, Dirichlet walls), the Darcy
//! potential on `[0,1]×[1,2]` (cell centred, Dirichlet top, Neumann sides and
//! interface). The two are coupled by a skew trace term across `y = 1`.

use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::precond::system::{assemble, SaddlePointSystem, SystemMeta};
use crate::problems::grid::GridSpec;
use crate::problems::mac::{remove_mean, Mac, Triplets};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StokesDarcyOptions {
    /// Drop the interface coupling.
    pub decoupled: bool,
}

/// Scaled Stokes–Darcy system with leading block
/// `blockdiag(A_s, A_d) + (1/ν)[[0, I₁₂ᵀ], [−I₁₂, 0]]`.
pub fn stokes_darcy_fd(grid: GridSpec, nu: f64) -> Result<SaddlePointSystem> {
    stokes_darcy_fd_with(grid, nu, StokesDarcyOptions::default())
}

pub fn stokes_darcy_fd_with(grid: GridSpec, nu: f64, opts: StokesDarcyOptions) -> Result<SaddlePointSystem> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParams(format!("viscosity must be positive, got {nu}")));
    }
    let g = Mac::new(grid.cells());
    let n = grid.cells();
    let h = grid.h();
    let nv = g.n_velocity();
    let nd = n * n;
    let dim = nv + nd;

    let mut t: Triplets = g.laplacian();
    t.extend(darcy_laplacian(n).into_iter().map(|(i, j, v)| (nv + i, nv + j, v)));
    if !opts.decoupled {
        for i in 0..n {
            let phi = nv + i; // Darcy cell (i, 0) touches the interface
            let vel = g.v(i, n - 1);
            t.push((vel, phi, h / nu));
            t.push((phi, vel, -h / nu));
        }
    }
    let f = CsrMatrix::from_triplets(dim, dim, &t)?;

    let bs = remove_mean(&g.divergence());
    let b = CsrMatrix::from_triplets(bs.nrows(), dim, &bs.triplets())?;
    let h2 = CsrMatrix::identity(b.nrows()).scaled(h * h);

    let mut rhs = vec![h * h; dim];
    rhs.extend(std::iter::repeat(0.0).take(b.nrows()));
    let mut meta = SystemMeta::new("stokes-darcy", nu, Some(n)).with_param("h", h);
    if opts.decoupled {
        meta = meta.with_param("decoupled", 1.0);
    }
    assemble(&f, &b, &h2, meta)?.with_rhs(rhs)
}

/// Cell-centred `h²(−Δ_h)` on an `n × n` grid, Dirichlet on the top face and
/// Neumann elsewhere.
fn darcy_laplacian(n: usize) -> Triplets {
    let idx = |i: usize, j: usize| j * n + i;
    let mut t = Vec::with_capacity(5 * n * n);
    for j in 0..n {
        for i in 0..n {
            let k = idx(i, j);
            let mut diag = 0.0;
            let mut link = |nb: usize| {
                t.push((k, nb, -1.0));
                diag += 1.0;
            };
            if i > 0 {
                link(idx(i - 1, j));
            }
            if i + 1 < n {
                link(idx(i + 1, j));
            }
            if j > 0 {
                link(idx(i, j - 1));
            }
            if j + 1 < n {
                link(idx(i, j + 1));
            } else {
                // Dirichlet ghost on the top face
                diag += 2.0;
            }
            t.push((k, k, diag));
        }
    }
    t
}
