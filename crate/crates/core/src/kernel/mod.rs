//! Scalar and 2x2 matrix primitives shared by every other module.

pub mod contour;
pub mod disc;
pub mod hyperbolic;
pub mod mat2;
pub mod poly;
pub mod sqrt;

pub use contour::{count_roots_in_disc, trace_winding, vanishing_order, winding_number, ContourTrace};
pub use disc::DiscMap;
pub use hyperbolic::{mobius, mobius_pseudodistance, poincare, Mobius};
pub use mat2::Mat2;
pub use poly::{Poly, Rational};
pub use sqrt::{analytic_sqrt, AnalyticSqrt, Branch};
