//! Reproducible problem generators.

pub mod grid;
mod mac;
pub mod oseen;
pub mod stokes_darcy;
pub mod synthetic;
pub mod toeplitz;

pub use grid::{GridSpec, WindField};
pub use mac::DIVERGENCE_TOL;
pub use oseen::{lid_velocity, oseen_fd};
pub use stokes_darcy::{stokes_darcy_fd, stokes_darcy_fd_with, StokesDarcyOptions};
pub use synthetic::{random_vector, synthetic};
pub use toeplitz::toeplitz_example;
