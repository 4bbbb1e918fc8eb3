//! Uniform grids on the unit square and convecting wind fields.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    cells: usize,
}

impl GridSpec {
    pub fn new(cells: usize) -> Result<Self> {
        if cells < 4 {
            return Err(Error::InvalidParams(format!("grid needs at least 4 cells per side, got {cells}")));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells as f64
    }
}

type Scalar2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A convecting velocity field on the unit square.
#[derive(Clone)]
pub enum WindField {
    /// `b = (∂ψ/∂y, −∂ψ/∂x)`; face fluxes are differences of `ψ`, so the
    /// discrete divergence vanishes up to rounding.
    Stream { name: String, psi: Scalar2 },
    /// Velocity components sampled at face midpoints.
    Velocity { name: String, bx: Scalar2, by: Scalar2 },
}

impl fmt::Debug for WindField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WindField({})", self.name())
    }
}

impl WindField {
    /// The recirculating field with stream function
    /// `ψ = amplitude · x²(1−x)²y²(1−y)²`.
    pub fn recirculating(amplitude: f64) -> Self {
        WindField::Stream {
            name: "recirculating".into(),
            psi: Arc::new(move |x, y| amplitude * (x * (1.0 - x) * y * (1.0 - y)).powi(2)),
        }
    }

    /// The recirculating field scaled so that its largest horizontal velocity
    /// equals the unit lid speed of the cavity.
    pub fn cavity() -> Self {
        // max ψ_y = f(½)·max f' with f(t) = t²(1−t)², attained at t = (3 − √3)/6
        let t = (3.0 - 3f64.sqrt()) / 6.0;
        let peak = (1.0 / 16.0) * 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
        let mut w = Self::recirculating(1.0 / peak);
        if let WindField::Stream { name, .. } = &mut w {
            *name = "cavity".into();
        }
        w
    }

    pub fn zero() -> Self {
        WindField::Stream {
            name: "zero".into(),
            psi: Arc::new(|_, _| 0.0),
        }
    }

    pub fn stream(name: &str, psi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        WindField::Stream {
            name: name.into(),
            psi: Arc::new(psi),
        }
    }

    pub fn velocity(
        name: &str,
        bx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        by: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WindField::Velocity {
            name: name.into(),
            bx: Arc::new(bx),
            by: Arc::new(by),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            WindField::Stream { name, .. } | WindField::Velocity { name, .. } => name,
        }
    }

    /// Whether the field is defined through a stream function.
    pub fn divergence_free(&self) -> bool {
        matches!(self, WindField::Stream { .. })
    }

    /// Outward fluxes `[east, west, north, south]` through the faces of the
    /// box `[xw, xe] × [ys, yn]`.
    pub fn box_fluxes(&self, xw: f64, xe: f64, ys: f64, yn: f64) -> [f64; 4] {
        match self {
            WindField::Stream { psi, .. } => {
                let (en, es, wn, ws) = (psi(xe, yn), psi(xe, ys), psi(xw, yn), psi(xw, ys));
                [en - es, ws - wn, wn - en, es - ws]
            }
            WindField::Velocity { bx, by, .. } => {
                let (xc, yc) = (0.5 * (xw + xe), 0.5 * (ys + yn));
                let (dx, dy) = (xe - xw, yn - ys);
                [
                    dy * bx(xe, yc),
                    -dy * bx(xw, yc),
                    dx * by(xc, yn),
                    -dx * by(xc, ys),
                ]
            }
        }
    }
}
