//! Exact computations for principal circle and torus bundles over connected
//! sums of sphere products, and for free torus actions on such manifolds.

pub mod acceptance;
pub mod bundle;
pub mod catalog;
pub mod error;
pub mod feasibility;
pub mod json;
pub mod lattice;
pub mod manifold;
pub mod oracle;

pub use error::{Error, Result};
