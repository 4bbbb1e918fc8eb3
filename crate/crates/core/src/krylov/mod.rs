//! Full GMRES in a weighted norm.

pub mod gmres;
pub mod operator;

pub use gmres::{gmres, GmresOptions, GmresTrace};
pub use operator::{FnOperator, LinearOperator};
