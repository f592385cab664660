//! Linearizations of pseudo-Boolean functions.
//!
//! * [`pbf`]: exact multilinear polynomials, signed products, certificates.
//! * [`lincomplexity`]: linearization complexities for the monomial,
//!   signed-product and all-Boolean families.
//! * [`ipmodels`]: solver-agnostic MILP builders, LP export, no-good
//!   separation and the external solver bridge.
//! * [`labs`]: the low-autocorrelation binary sequences application.

pub mod caps;
pub mod cli;
pub mod error;
pub mod ipmodels;
pub mod labs;
mod linalg;
pub mod lincomplexity;
pub mod pbf;
pub mod rational;

pub use caps::Caps;
pub use error::{Error, ErrorKind, Result};
pub use rational::Rational;
