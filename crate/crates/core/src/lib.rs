//! Exact symbolic engine for monoid actions on graded spaces and bundles:
//! real, complex and super homogeneity structures, jet monoids `G_k`, and
//! actions of `M_2(R)`.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod graded;
pub mod jet;
pub mod jet_bundle;
pub mod g2;
pub mod m2;
pub mod complex;
pub mod supergeo;
