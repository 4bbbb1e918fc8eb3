//! Min-max polynomial estimates `E_n(S) = min_{p(0)=1} max_{z∈S} |p(z)|` by
//! Lawson's iteratively reweighted least squares.
//!
//! Polynomials are written `p(z) = 1 − z s(z)` and the span of
//! `z, z², …, zⁿ` is represented by a weighted Arnoldi basis on the samples,
//! so the least-squares step is a projection and stays well conditioned at
//! high degree.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fov::{winding_number, RegionCG};

/// Boundary samples per coefficient required for loop regions.
pub const SAMPLES_PER_COEFFICIENT: usize = 8;
pub const MAX_ROUNDS: usize = 200;
pub const STAGNATION: f64 = 1e-8;
/// Density factor of the resample used to certify the final polynomial.
pub const CERTIFY_FACTOR: usize = 4;

/// A compact set given by closed boundary loops and isolated points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub loops: Vec<Vec<Complex64>>,
    pub points: Vec<Complex64>,
}

impl Region {
    pub fn from_loops(loops: Vec<Vec<Complex64>>) -> Self {
        Self { loops, points: Vec::new() }
    }

    pub fn from_points(points: Vec<Complex64>) -> Self {
        Self { loops: Vec::new(), points }
    }

    /// The circle `|z − c| = r` sampled at `n` points.
    pub fn disk(center: Complex64, radius: f64, n: usize) -> Self {
        let l = (0..n)
            .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
            .collect();
        Self::from_loops(vec![l])
    }

    pub fn samples(&self) -> Vec<Complex64> {
        let mut s: Vec<Complex64> = self.loops.iter().flatten().copied().collect();
        s.extend(&self.points);
        s
    }

    pub fn n_boundary_samples(&self) -> usize {
        self.loops.iter().map(Vec::len).sum()
    }

    /// Loops refined by linear interpolation, `factor` points per edge.
    pub fn resample(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let loops = self
            .loops
            .iter()
            .map(|l| {
                let mut out = Vec::with_capacity(l.len() * factor);
                for (k, &z) in l.iter().enumerate() {
                    let w = l[(k + 1) % l.len()];
                    out.extend((0..factor).map(|j| z + (w - z) * (j as f64 / factor as f64)));
                }
                out
            })
            .collect();
        Self {
            loops,
            points: self.points.clone(),
        }
    }

    /// Whether the origin is a sample or is enclosed by the region.
    pub fn contains_origin(&self) -> bool {
        let signed: i64 = self.loops.iter().map(|l| winding_number(l)).sum();
        signed != 0 || self.samples().iter().any(|z| *z == Complex64::new(0.0, 0.0))
    }
}

impl From<&RegionCG> for Region {
    fn from(r: &RegionCG) -> Self {
        Self {
            loops: r.loops.clone(),
            points: r.discrete.clone(),
        }
    }
}

/// A polynomial `1 − z s(z)` stored through its Arnoldi recurrence.
#[derive(Debug, Clone)]
struct ArnoldiPoly {
    /// `hess[j]` holds the coefficients of column `j`, `j+2` entries long.
    hess: Vec<Vec<Complex64>>,
    first_scale: f64,
    coef: Vec<Complex64>,
}

impl ArnoldiPoly {
    fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        if self.coef.is_empty() {
            return vec![one; z.len()];
        }
        let mut q: Vec<Vec<Complex64>> = vec![z.iter().map(|x| x / self.first_scale).collect()];
        for h in self.hess.iter().take(self.coef.len() - 1) {
            let j = q.len() - 1;
            let mut v: Vec<Complex64> = z.iter().zip(&q[j]).map(|(x, y)| x * y).collect();
            for (i, qi) in q.iter().enumerate() {
                for (vk, qk) in v.iter_mut().zip(qi) {
                    *vk -= h[i] * qk;
                }
            }
            let d = h[j + 1];
            v.iter_mut().for_each(|x| *x /= d);
            q.push(v);
        }
        let mut p = vec![one; z.len()];
        for (c, qj) in self.coef.iter().zip(&q) {
            for (pk, qk) in p.iter_mut().zip(qj) {
                *pk -= c * qk;
            }
        }
        p
    }
}

fn winner(p: &[Complex64]) -> f64 {
    p.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Weighted least-squares fit of `1` by `span{z, …, zⁿ}` on the samples.
/// Returns the polynomial and its values on the samples.
fn weighted_fit(z: &DVector<Complex64>, w: &DVector<Complex64>, n: usize) -> (ArnoldiPoly, Vec<Complex64>) {
    let k = z.len();
    let wnorm = |a: &DVector<Complex64>| a.iter().zip(w.iter()).map(|(x, wk)| x.norm_sqr() * wk.re).sum::<f64>().sqrt();
    let first_scale = wnorm(z);
    let mut q = DMatrix::<Complex64>::zeros(k, n);
    let mut hess = Vec::new();
    let mut cols = 0;
    if first_scale > 0.0 {
        q.set_column(0, &z.unscale(first_scale));
        cols = 1;
    }
    while cols < n && cols > 0 {
        let j = cols - 1;
        let mut v = z.component_mul(&q.column(j));
        let before = wnorm(&v);
        let mut h = DVector::<Complex64>::zeros(cols);
        for _ in 0..2 {
            let basis = q.columns(0, cols);
            let c = basis.ad_mul(&v.component_mul(w));
            v.gemv(Complex64::new(-1.0, 0.0), &basis, &c, Complex64::new(1.0, 0.0));
            h += c;
        }
        let after = wnorm(&v);
        // the Krylov space is exhausted once the samples are interpolated
        if after <= 1e-13 * before.max(f64::MIN_POSITIVE) {
            break;
        }
        let mut hj: Vec<Complex64> = h.iter().copied().collect();
        hj.push(Complex64::new(after, 0.0));
        hess.push(hj);
        q.set_column(cols, &v.unscale(after));
        cols += 1;
    }
    let basis = q.columns(0, cols);
    let coef = basis.ad_mul(w);
    let fit = basis * &coef;
    let vals = fit.iter().map(|f| Complex64::new(1.0, 0.0) - f).collect();
    let poly = ArnoldiPoly {
        hess,
        first_scale: first_scale.max(f64::MIN_POSITIVE),
        coef: coef.iter().copied().collect(),
    };
    (poly, vals)
}

/// Lawson iteration on one sample set; returns the best polynomial found.
fn lawson(samples: &[Complex64], n: usize) -> ArnoldiPoly {
    let z = DVector::from_column_slice(samples);
    let mut w = DVector::from_element(z.len(), Complex64::new(1.0 / z.len() as f64, 0.0));
    let mut best: Option<(f64, ArnoldiPoly)> = None;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ROUNDS {
        let (poly, vals) = weighted_fit(&z, &w, n);
        let err = winner(&vals);
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, poly));
        }
        if err <= 1e-14 || (last - err).abs() <= STAGNATION * err {
            break;
        }
        last = err;
        for (wk, v) in w.iter_mut().zip(&vals) {
            *wk *= v.norm();
        }
        let total: f64 = w.iter().map(|x| x.re).sum();
        if !(total > 0.0 && total.is_finite()) {
            break;
        }
        w.unscale_mut(total);
    }
    best.expect("at least one round").1
}

/// `E_n` on the region, certified by evaluating the computed polynomial on
/// a denser resample of the boundary.
pub fn estimate_en(region: &Region, n: usize) -> Result<f64> {
    let samples = region.samples();
    if samples.is_empty() {
        return Err(Error::EmptyRegion);
    }
    if n == 0 || region.contains_origin() {
        return Ok(1.0);
    }
    let nb = region.n_boundary_samples();
    let required = SAMPLES_PER_COEFFICIENT * (n + 1);
    if nb > 0 && nb < required {
        return Err(Error::Degenerate { samples: nb, required });
    }
    let poly = lawson(&samples, n);
    let dense = if nb > 0 { region.resample(CERTIFY_FACTOR).samples() } else { samples };
    Ok(winner(&poly.eval(&dense)))
}
