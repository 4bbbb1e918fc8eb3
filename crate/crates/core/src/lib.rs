//! Weighted-norm GMRES, block preconditioners for saddle-point systems, and
//! field-of-values convergence certificates.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense and banded kernels, SPD factorizations, weighted spaces
//!   and weighted operator norms.
//! - [`krylov`]: full GMRES minimizing the residual in a weighted norm.
//! - [`precond`]: saddle-point systems, block preconditioners and the checks of
//!   the standing assumptions.
//! - [`fov`]: field-of-values boundaries, the constants `a`, `b`, `c` and the
//!   convergence certificate.
//! - [`polybound`]: min-max polynomial estimates on sampled regions.
//! - [`problems`]: reproducible test problem generators.

pub mod error;
pub mod fov;
pub mod krylov;
pub mod linalg;
pub mod polybound;
pub mod precond;
pub mod problems;

pub use error::{Error, Result};
