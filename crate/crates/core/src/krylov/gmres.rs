//! Unrestarted GMRES minimizing `‖b − A x‖_H`.
//!
//! Arnoldi runs in the `H` inner product, evaluated as `(T u)·(T v)` through
//! the factor of the weighted space. Each new direction is orthogonalized by
//! modified Gram–Schmidt followed by a second full pass.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::krylov::operator::LinearOperator;
use crate::linalg::dense::{axpy, dot, norm2, scale};
use crate::linalg::space::WeightedSpace;

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Relative tolerance on `‖r_k‖_H / ‖r_0‖_H`.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep `x_k` for every `k` in the trace.
    pub record_iterates: bool,
    /// Keep the Arnoldi basis in the trace.
    pub keep_basis: bool,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self {
            tol: 1e-5,
            max_iter: 1000,
            record_iterates: false,
            keep_basis: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GmresTrace {
    /// `‖r_j‖_H` for `j = 0..=iterations`, from the Givens recurrence.
    pub residuals_weighted: Vec<f64>,
    /// `‖r_j‖₂` for `j = 0..=iterations`.
    pub residuals_euclid: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Step at which the Krylov space became invariant, if it did.
    pub breakdown: Option<usize>,
    /// `‖b − A x_k‖_H` recomputed from the returned solution.
    pub final_residual_weighted: f64,
    /// `‖rhs − K x‖₂` of the original, unpreconditioned system when GMRES was
    /// run on a preconditioned operator.
    pub unpreconditioned_residual: Option<f64>,
    #[serde(skip)]
    pub iterates: Vec<Vec<f64>>,
    #[serde(skip)]
    pub basis: Vec<Vec<f64>>,
}

impl GmresTrace {
    /// Relative residuals `‖r_j‖_H / ‖r_0‖_H`.
    pub fn relative_weighted(&self) -> Vec<f64> {
        let r0 = self.residuals_weighted.first().copied().unwrap_or(0.0);
        self.residuals_weighted
            .iter()
            .map(|r| if r0 > 0.0 { r / r0 } else { 0.0 })
            .collect()
    }
}

struct Givens {
    c: f64,
    s: f64,
}

impl Givens {
    fn new(a: f64, b: f64) -> Self {
        let r = a.hypot(b);
        if r == 0.0 {
            Self { c: 1.0, s: 0.0 }
        } else {
            Self { c: a / r, s: b / r }
        }
    }

    fn apply(&self, x: &mut f64, y: &mut f64) {
        let (a, b) = (*x, *y);
        *x = self.c * a + self.s * b;
        *y = -self.s * a + self.c * b;
    }
}

/// Solves `A x = b` by GMRES in the norm of `space`, starting from `x0`.
pub fn gmres(
    a: &dyn LinearOperator,
    b: &[f64],
    x0: &[f64],
    space: &WeightedSpace,
    opts: &GmresOptions,
) -> Result<(Vec<f64>, GmresTrace)> {
    let n = a.dim();
    check_dim(n, b.len())?;
    check_dim(n, x0.len())?;
    check_dim(n, space.dim())?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParams(format!("tolerance {} must be positive", opts.tol)));
    }

    let mut r = a.apply(x0);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let zr = space.transform(&r);
    let beta = norm2(&zr);
    let mut trace = GmresTrace {
        residuals_weighted: vec![beta],
        residuals_euclid: vec![norm2(&r)],
        ..Default::default()
    };
    if opts.record_iterates {
        trace.iterates.push(x0.to_vec());
    }
    if beta == 0.0 {
        trace.converged = true;
        trace.final_residual_weighted = 0.0;
        return Ok((x0.to_vec(), trace));
    }

    let maxit = opts.max_iter.min(n).max(1);
    let mut v: Vec<Vec<f64>> = Vec::with_capacity(maxit + 1);
    let mut z: Vec<Vec<f64>> = Vec::with_capacity(maxit + 1);
    let mut v0 = r;
    scale(1.0 / beta, &mut v0);
    let mut z0 = zr;
    scale(1.0 / beta, &mut z0);
    v.push(v0);
    z.push(z0);
    // Column j of the Hessenberg matrix, already rotated.
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(maxit);
    let mut rots: Vec<Givens> = Vec::with_capacity(maxit);
    let mut g = vec![beta];

    let mut k = 0;
    while k < maxit {
        let j = k;
        let mut zw = space.transform(&a.apply(&v[j]));
        let wnorm = norm2(&zw);
        let mut col = vec![0.0; j + 2];
        for _pass in 0..2 {
            for i in 0..=j {
                let hij = dot(&zw, &z[i]);
                col[i] += hij;
                axpy(-hij, &z[i], &mut zw);
            }
        }
        let hnext = norm2(&zw);
        col[j + 1] = hnext;
        for (i, rot) in rots.iter().enumerate() {
            let (mut x, mut y) = (col[i], col[i + 1]);
            rot.apply(&mut x, &mut y);
            col[i] = x;
            col[i + 1] = y;
        }
        let rot = Givens::new(col[j], col[j + 1]);
        {
            let (mut x, mut y) = (col[j], col[j + 1]);
            rot.apply(&mut x, &mut y);
            col[j] = x;
            col[j + 1] = 0.0;
        }
        let mut gj = g[j];
        let mut gj1 = 0.0;
        rot.apply(&mut gj, &mut gj1);
        g[j] = gj;
        g.push(gj1);
        rots.push(rot);
        h.push(col);
        k += 1;

        // At k = n the Krylov space is the whole space, so the next direction
        // is rounding noise.
        let happy = hnext <= 1e-14 * wnorm.max(f64::MIN_POSITIVE) || hnext == 0.0 || k == n;
        if !happy {
            scale(1.0 / hnext, &mut zw);
            // Recovering v from z keeps v_j = T⁻¹z_j exact to rounding; a
            // separately updated v drifts when h_{j+1,j} is small.
            v.push(space.inv_transform(&zw));
            z.push(zw);
        }
        let res = g[k].abs();
        trace.residuals_weighted.push(res);

        // Euclidean residual: r_k = V_{k+1} Qᵀ (g_k e_{k+1}).
        let mut u = vec![0.0; k + 1];
        u[k] = g[k];
        for i in (0..k).rev() {
            let (mut x, mut y) = (u[i], u[i + 1]);
            let r = &rots[i];
            // Inverse rotation.
            let c = r.c;
            let s = r.s;
            let (a0, b0) = (x, y);
            x = c * a0 - s * b0;
            y = s * a0 + c * b0;
            u[i] = x;
            u[i + 1] = y;
        }
        let mut rk = vec![0.0; n];
        for (ui, vi) in u.iter().zip(&v) {
            axpy(*ui, vi, &mut rk);
        }
        trace.residuals_euclid.push(norm2(&rk));

        if opts.record_iterates {
            trace.iterates.push(assemble_solution(x0, &v, &h, &g, k));
        }
        if happy {
            trace.breakdown = Some(k);
            trace.converged = true;
            break;
        }
        if res <= opts.tol * beta {
            trace.converged = true;
            break;
        }
    }
    trace.iterations = k;
    let x = assemble_solution(x0, &v, &h, &g, k);
    let mut rf = a.apply(&x);
    for (ri, bi) in rf.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    trace.final_residual_weighted = space.norm(&rf);
    if trace.breakdown.is_some() {
        // The recurrence residual at breakdown is zero in exact arithmetic;
        // report what was actually attained.
        let last = trace.residuals_weighted.len() - 1;
        trace.residuals_weighted[last] = trace.residuals_weighted[last].min(trace.final_residual_weighted);
    }
    if opts.keep_basis {
        trace.basis = v;
    }
    Ok((x, trace))
}

fn assemble_solution(x0: &[f64], v: &[Vec<f64>], h: &[Vec<f64>], g: &[f64], k: usize) -> Vec<f64> {
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for j in i + 1..k {
            s -= h[j][i] * y[j];
        }
        y[i] = s / h[i][i];
    }
    let mut x = x0.to_vec();
    for (yi, vi) in y.iter().zip(v) {
        axpy(*yi, vi, &mut x);
    }
    x
}
