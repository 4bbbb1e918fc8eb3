//! Min-max polynomial bounds on sampled regions and the spectral bound.

mod curve;
mod lawson;
mod spectral;

pub use curve::{asymptotic_factor, en_curve, en_values, gmres_bound_curve, spectral_set_constant, BoundCurve};
pub use lawson::{estimate_en, Region, CERTIFY_FACTOR, MAX_ROUNDS, SAMPLES_PER_COEFFICIENT, STAGNATION};
pub use spectral::{eigen_decomposition, spectral_bound, EigenDecomposition, DEFECTIVE_CONDITION};
