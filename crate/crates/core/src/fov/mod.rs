//! Field of values in a weighted geometry, the constants `a`, `b`, `c`, the
//! region `Ω_CG` and convergence certificates.
//!
//! All computations act on the transformed matrix `Ã = T A T⁻¹`, for which
//! `W_H(A) = W(Ã)` and `‖A‖_H = ‖Ã‖₂`.

pub mod boundary;
pub mod certificate;
pub mod region;
pub mod svg;

pub use boundary::{fov_boundary, numerical_radius, FovBoundary};
pub use certificate::{
    certificate, constants_abc, CertificateOptions, FovCertificate, COND4_MARGIN, DEFAULT_ANGLES, DIMENSION_GUARD,
};
pub use region::{winding_number, RegionCG, DEFAULT_SAMPLES};
pub use svg::certificate_svg;
