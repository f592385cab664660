//! Exact pseudo-Boolean functions as multilinear polynomials.

mod boolean;
mod certificate;
mod point;
mod poly;
mod text;

pub use boolean::{BooleanFn, SignedProduct, TruthTable};
pub use certificate::{verify_certificate, Family, LinearizationCertificate, TermFunction};
pub use point::{all_points, PointAssignment};
pub use poly::{interpolate, interpolate_table, MultilinearPoly, TermKey, MAX_ARITY};
pub use text::parse_poly;
