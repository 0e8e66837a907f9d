//! Exact computer algebra for quantum tangent bundles: κ-Minkowski space and
//! its κ-Poincaré action, finite-dimensional *-algebras, coverings by ideals,
//! partitions of unity, glued derivations, differential forms and connections.

pub mod algebra;
pub mod connection;
pub mod covering;
pub mod error;
pub mod forms;
pub mod kappa;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod tangent;

pub use algebra::{Character, Model, StarAlgebra};
pub use error::{Error, Result};
pub use report::{Check, Report};
pub use scalar::Scalar;
