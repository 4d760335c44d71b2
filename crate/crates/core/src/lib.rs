//! Constructive machinery around the Lempert property of the tetrablock
//!
//! ```text
//! E = { z in C^3 : |z2 - conj(z1) z3| + |z1 z2 - z3| + |z1|^2 < 1 }
//! ```
//!
//! the image of the 2x2 matrix ball under `x -> (x11, x22, det x)`.
//!
//! The crate is layered bottom-up:
//!
//! - [`kernel`]: complex 2x2 matrices, polynomials and rational discs, the
//!   hyperbolic disc, winding numbers and analytic square roots.
//! - [`domains`]: membership predicates for the tetrablock, the symmetrized
//!   bidisc and the Cartan domains, the projection `pi` and the gauge `rho`.
//! - [`transforms`]: automorphisms of the Cartan domains and of the tetrablock,
//!   and the scalar families `Psi_z`, `F_a`.
//! - [`geodesic`]: the extremal disc families, the Cohn criterion and the
//!   triangular-set avoidance test.
//! - [`left_inverse`]: left inverses of each family, including the Rouche
//!   fixed-point construction for balanced domains.
//! - [`lifting`]: lifting discs through `pi` to matrix discs.
//! - [`verifier`]: certification of `c = k` on geodesic-generated pairs,
//!   plurisubharmonicity spot checks and non-convexity witnesses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod domains;
pub mod error;
pub mod geodesic;
pub mod kernel;
pub mod left_inverse;
pub mod lifting;
pub mod sampling;
pub mod transforms;
pub mod verifier;

pub use config::Tolerances;
pub use domains::{MembershipReport, Point3};
pub use error::{Error, Result};
pub use geodesic::{GeodesicSpec, NonTriangularSpec, TriangularSpec};
pub use kernel::{DiscMap, Mat2, Mobius, Poly, Rational};
pub use left_inverse::{LeftInverseSpec, RoucheResult};
pub use transforms::TetraAutParams;

pub use num_complex::Complex64;

/// Shorthand constructor for a complex number.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
