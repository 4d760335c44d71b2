//! Membership predicates, the projection `pi` and the gauge `rho`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Mat2;

/// A point of `C^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Point3 {
    pub z1: Complex64,
    pub z2: Complex64,
    pub z3: Complex64,
}

impl Point3 {
    pub const fn new(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Self { z1, z2, z3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_array(z: [Complex64; 3]) -> Self {
        Self::new(z[0], z[1], z[2])
    }

    pub fn to_array(&self) -> [Complex64; 3] {
        [self.z1, self.z2, self.z3]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|z| z.is_finite())
    }

    /// `max_j |z_j - w_j|`.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.z1 - o.z1)
            .norm()
            .max((self.z2 - o.z2).norm())
            .max((self.z3 - o.z3).norm())
    }

    /// `z1 z2 - z3`, which vanishes exactly on the triangular set.
    pub fn triangular_defect(&self) -> Complex64 {
        self.z1 * self.z2 - self.z3
    }

    /// Coordinates swapped `(z2, z1, z3)`; preserves the tetrablock.
    pub fn swapped(&self) -> Self {
        Self::new(self.z2, self.z1, self.z3)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.z1 + o.z1, self.z2 + o.z2, self.z3 + o.z3)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.z1 - o.z1, self.z2 - o.z2, self.z3 - o.z3)
    }
}

impl Mul<Complex64> for Point3 {
    type Output = Point3;
    fn mul(self, s: Complex64) -> Point3 {
        Point3::new(self.z1 * s, self.z2 * s, self.z3 * s)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.z1 * s, self.z2 * s, self.z3 * s)
    }
}

/// Verdict of a strict membership test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub inside: bool,
    /// One minus the defining function; positive exactly when inside.
    pub margin: f64,
}

impl MembershipReport {
    pub fn from_margin(margin: f64) -> Self {
        Self { inside: margin > 0.0, margin }
    }

    pub fn on_boundary(&self, band: f64) -> bool {
        self.margin.abs() <= band
    }
}

pub fn in_tetrablock(z: &Point3) -> MembershipReport {
    let Point3 { z1, z2, z3 } = *z;
    MembershipReport::from_margin(
        1.0 - ((z2 - z1.conj() * z3).norm() + (z1 * z2 - z3).norm() + z1.norm_sqr()),
    )
}

/// The equivalent description `|z1 - conj(z2) z3| + |z2 - conj(z1) z3| + |z3|^2 < 1`.
pub fn in_tetrablock_alt(z: &Point3) -> MembershipReport {
    let Point3 { z1, z2, z3 } = *z;
    MembershipReport::from_margin(
        1.0 - ((z1 - z2.conj() * z3).norm() + (z2 - z1.conj() * z3).norm() + z3.norm_sqr()),
    )
}

pub fn in_symmetrized_bidisc(s: Complex64, p: Complex64) -> MembershipReport {
    MembershipReport::from_margin(1.0 - ((s - s.conj() * p).norm() + p.norm_sqr()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanKind {
    /// All 2x2 matrices of norm below one.
    I,
    /// The symmetric ones.
    II,
}

/// Membership of a matrix in the Cartan domain of the given kind.
///
/// For kind II an asymmetric matrix gets margin `min(1 - |x|, -|x12 - x21|)`,
/// which is never positive.
pub fn in_cartan(x: &Mat2, kind: CartanKind, tol_sym: f64) -> MembershipReport {
    let margin = 1.0 - x.op_norm();
    match kind {
        CartanKind::I => MembershipReport::from_margin(margin),
        CartanKind::II if x.is_symmetric(tol_sym) => MembershipReport::from_margin(margin),
        CartanKind::II => MembershipReport::from_margin(margin.min(-(x.e12 - x.e21).norm())),
    }
}

pub fn project_pi(x: &Mat2) -> Point3 {
    Point3::new(x.e11, x.e22, x.det())
}

/// The two symmetric matrices `(z1, +-w; +-w, z2)` with `w^2 = z1 z2 - z3`,
/// the `+` one using the principal root.
pub fn symmetric_preimages(z: &Point3) -> [Mat2; 2] {
    let w = z.triangular_defect().sqrt();
    [Mat2::symmetric(z.z1, w, z.z2), Mat2::symmetric(z.z1, -w, z.z2)]
}

/// Largest norm of a symmetric preimage under `pi`; `z` is in the tetrablock iff `rho(z) < 1`.
pub fn rho(z: &Point3) -> f64 {
    symmetric_preimages(z)
        .iter()
        .map(Mat2::op_norm)
        .fold(0.0, f64::max)
}

pub fn in_triangular_set(z: &Point3, tol: f64) -> bool {
    z.triangular_defect().norm() <= tol
}

/// `(lambda^{m_1} z_1, ..., lambda^{m_n} z_n)`.
pub fn scale_balanced(z: &[Complex64], lambda: Complex64, weights: &[u32]) -> Result<Vec<Complex64>> {
    if z.len() != weights.len() {
        return Err(Error::Parameter(format!(
            "{} coordinates but {} weights",
            z.len(),
            weights.len()
        )));
    }
    if weights.iter().all(|&m| m == 0) {
        return Err(Error::Parameter("balanced weights must not all vanish".into()));
    }
    Ok(z.iter()
        .zip(weights)
        .map(|(&zj, &m)| zj * lambda.powu(m))
        .collect())
}

/// [`scale_balanced`] for points of `C^3`.
pub fn scale_point(z: &Point3, lambda: Complex64, weights: [u32; 3]) -> Result<Point3> {
    let v = scale_balanced(&z.to_array(), lambda, &weights)?;
    Ok(Point3::new(v[0], v[1], v[2]))
}

/// `(lambda z1, lambda z2, lambda^2 z3)`.
pub fn phi_lambda(z: &Point3, lambda: Complex64) -> Point3 {
    Point3::new(lambda * z.z1, lambda * z.z2, lambda * lambda * z.z3)
}
