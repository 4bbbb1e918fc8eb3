//! Dense and banded linear algebra used by the rest of the crate.
//!
//! Weighted operator norms follow one convention throughout. A
//! [`WeightedSpace`] carrying the SPD matrix `H = Pᵀ L Lᵀ P` has the coordinate
//! transform `T = Lᵀ P`, so that `‖x‖_H = ‖T x‖₂`. Its inverse space (norm
//! matrix `H⁻¹`) has the transform `L⁻¹ P`. Then
//!
//! ```text
//! op_norm(M, from, to) = ‖T_to M T_from⁻¹‖₂
//! ```
//!
//! | quantity            | from       | to          |
//! |---------------------|------------|-------------|
//! | `‖M‖_H`             | `H`        | `H`         |
//! | `‖M‖_{H1,H2}`       | `H1`       | `H2`        |
//! | `‖M‖_{H1,H2⁻¹}`     | `H1`       | `H2⁻¹`      |
//! | `‖M‖_{H1⁻¹,H2}`     | `H1⁻¹`     | `H2`        |

pub mod band;
pub mod dense;
pub mod lanczos;
pub mod lu;
pub mod mm;
pub mod norms;
pub mod space;
pub mod sparse;

pub use band::{BandLu, SpdFactor};
pub use dense::Matrix;
pub use lu::{lu_solve, DenseLu};
pub use norms::{inv_norm, op_norm, NormEstimate, NormOptions};
pub use space::{factor_spd, weighted_inner, WeightedSpace};
pub use sparse::CsrMatrix;
