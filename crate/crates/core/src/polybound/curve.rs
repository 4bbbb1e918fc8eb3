//! Bound curves over polynomial degree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fov::FovCertificate;
use crate::polybound::lawson::{estimate_en, Region};

/// `2 + √7`, the spectral-set constant of `Ω_CG`.
pub fn spectral_set_constant() -> f64 {
    2.0 + 7f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub degrees: Vec<usize>,
    /// Raw values; entries above 1 are vacuous but kept.
    pub values: Vec<f64>,
    /// `min(value, 1)`, for reporting.
    pub clamped: Vec<f64>,
    pub region_id: String,
    pub method: String,
}

impl BoundCurve {
    fn new(degrees: Vec<usize>, values: Vec<f64>, region_id: &str, method: &str) -> Self {
        let clamped = values.iter().map(|v| v.min(1.0)).collect();
        Self {
            degrees,
            values,
            clamped,
            region_id: region_id.into(),
            method: method.into(),
        }
    }

    /// Value at `degree`, if tabulated.
    pub fn at(&self, degree: usize) -> Option<f64> {
        self.degrees.iter().position(|&d| d == degree).map(|k| self.values[k])
    }

    /// Smallest tabulated degree whose value is at most `level`.
    pub fn first_below(&self, level: f64) -> Option<usize> {
        self.degrees.iter().zip(&self.values).find(|(_, v)| **v <= level).map(|(d, _)| *d)
    }
}

fn check_degrees(degrees: &[usize]) -> Result<()> {
    if degrees.is_empty() || degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("degrees must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// `E_n` at each degree. Degrees are evaluated independently and the running
/// minimum is taken, since a polynomial of degree `n` is feasible for every
/// larger degree.
pub fn en_values(region: &Region, degrees: &[usize]) -> Result<Vec<f64>> {
    check_degrees(degrees)?;
    let raw: Vec<f64> = degrees
        .par_iter()
        .map(|&n| estimate_en(region, n))
        .collect::<Result<Vec<f64>>>()?;
    let mut best = f64::INFINITY;
    Ok(raw
        .into_iter()
        .map(|v| {
            best = best.min(v);
            best
        })
        .collect())
}

pub fn en_curve(region: &Region, degrees: &[usize], region_id: &str) -> Result<BoundCurve> {
    let values = en_values(region, degrees)?;
    Ok(BoundCurve::new(degrees.to_vec(), values, region_id, "lawson"))
}

/// `exp` of the least-squares slope of `log E_n` over `n ∈ [n_max/2, n_max]`.
pub fn asymptotic_factor(region: &Region, n_max: usize) -> Result<f64> {
    if n_max < 4 {
        return Err(Error::InvalidParams(format!("n_max must be at least 4, got {n_max}")));
    }
    let degrees: Vec<usize> = (n_max / 2..=n_max).collect();
    let values = en_values(region, &degrees)?;
    // points where E_n vanishes carry no slope information
    let pts: Vec<(f64, f64)> = degrees
        .iter()
        .zip(&values)
        .filter(|(_, v)| **v > 1e-300)
        .map(|(d, v)| (*d as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok((sxy / sxx).exp())
}

/// `(2+√7)·E_k(Ω_CG)` for `k = 0..=n_max`.
pub fn gmres_bound_curve(cert: &FovCertificate, n_max: usize) -> Result<BoundCurve> {
    let region = Region::from(&cert.region);
    if region.samples().is_empty() {
        return Err(Error::EmptyRegion);
    }
    let degrees: Vec<usize> = (0..=n_max).collect();
    let k = spectral_set_constant();
    let values = en_values(&region, &degrees)?.into_iter().map(|e| k * e).collect();
    Ok(BoundCurve::new(degrees, values, "omega_cg", "fov"))
}
