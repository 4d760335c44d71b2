//! Automorphisms of the matrix ball and of the tetrablock, and the scalar
//! families `Psi_z`, `F_a`.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::{in_symmetrized_bidisc, in_tetrablock, project_pi, symmetric_preimages, Point3};
use crate::error::{Error, Result};
use crate::kernel::{DiscMap, Mat2, Rational};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn unit(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// `Phi_a(x) = (1 - a a*)^{-1/2} (x - a) (1 - a* x)^{-1} (1 - a* a)^{1/2}`.
pub fn phi_a(a: &Mat2, x: &Mat2) -> Result<Mat2> {
    if !(a.op_norm() < 1.0) {
        return Err(Error::Parameter(format!("|a| = {} is not below 1", a.op_norm())));
    }
    if !(x.op_norm() < 1.0) {
        return Err(Error::Parameter(format!("|x| = {} is not below 1", x.op_norm())));
    }
    phi_a_unchecked(a, x)
}

/// [`phi_a`] without the norm test on `x`, for evaluation on the closed ball.
pub(crate) fn phi_a_unchecked(a: &Mat2, x: &Mat2) -> Result<Mat2> {
    let id = Mat2::identity();
    let left = (id - *a * a.adjoint())
        .hermitian_sqrt()
        .and_then(|s| s.inverse())
        .ok_or_else(|| Error::Parameter("1 - a a* is not positive definite".into()))?;
    let right = (id - a.adjoint() * *a)
        .hermitian_sqrt()
        .ok_or_else(|| Error::Parameter("1 - a* a is not positive definite".into()))?;
    let mid = (id - a.adjoint() * *x)
        .inverse()
        .ok_or_else(|| Error::Singularity("1 - a* x is not invertible".into()))?;
    Ok(left * (*x - *a) * mid * right)
}

/// `phi_c = Phi_{c~}` with `c~` the matrix whose only non-zero entry is `c` at (2,1).
pub fn phi_c_lower(c: Complex64, x: &Mat2, tol: &Tolerances) -> Result<Mat2> {
    if !(c.norm() < 1.0) {
        return Err(Error::Parameter(format!("|c| = {} is not below 1", c.norm())));
    }
    let den = ONE - c.conj() * x.e21;
    if den.norm() < tol.singular {
        return Err(Error::Singularity(format!("1 - conj(c) x21 = {den}")));
    }
    let s = (1.0 - c.norm_sqr()).sqrt();
    Ok(Mat2::new(
        x.e11 * s / den,
        (x.e12 + c.conj() * x.det()) / den,
        (x.e21 - c) / den,
        x.e22 * s / den,
    ))
}

/// Parameters of the automorphism `psi` of the tetrablock covered by
/// `x -> U Phi_a(x) U^t` with `a = diag(a1, a2)` and `U` either
/// `diag(e^{i theta}, e^{i eta})` or the anti-diagonal `(0, e^{i theta}; e^{i eta}, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TetraAutParams {
    pub a1: Complex64,
    pub a2: Complex64,
    pub theta: f64,
    pub eta: f64,
    #[serde(default)]
    pub swap: bool,
}

impl TetraAutParams {
    pub fn new(a1: Complex64, a2: Complex64, theta: f64, eta: f64, swap: bool) -> Result<Self> {
        let p = Self { a1, a2, theta, eta, swap };
        p.validate()?;
        Ok(p)
    }

    pub fn identity() -> Self {
        Self {
            a1: Complex64::new(0.0, 0.0),
            a2: Complex64::new(0.0, 0.0),
            theta: 0.0,
            eta: 0.0,
            swap: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a1.norm() < 1.0 && self.a2.norm() < 1.0) {
            return Err(Error::Parameter(format!(
                "automorphism parameters need |a1|, |a2| < 1, got {} and {}",
                self.a1.norm(),
                self.a2.norm()
            )));
        }
        if !(self.theta.is_finite() && self.eta.is_finite()) {
            return Err(Error::Parameter("non-finite rotation angle".into()));
        }
        Ok(())
    }

    pub fn a_matrix(&self) -> Mat2 {
        Mat2::diag(self.a1, self.a2)
    }

    pub fn u_matrix(&self) -> Mat2 {
        if self.swap {
            Mat2::anti_diag(unit(self.theta), unit(self.eta))
        } else {
            Mat2::diag(unit(self.theta), unit(self.eta))
        }
    }

    /// The matrix automorphism `x -> U Phi_a(x) U^t`.
    pub fn matrix_map(&self, x: &Mat2) -> Result<Mat2> {
        let u = self.u_matrix();
        Ok(u * phi_a_unchecked(&self.a_matrix(), x)? * u.transpose())
    }

    /// Parameters of the inverse automorphism.
    pub fn inverse(&self) -> Self {
        let (r1, r2) = (unit(2.0 * self.theta), unit(2.0 * self.eta));
        if self.swap {
            Self {
                a1: -r1 * self.a2,
                a2: -r2 * self.a1,
                theta: -self.eta,
                eta: -self.theta,
                swap: true,
            }
        } else {
            Self {
                a1: -r1 * self.a1,
                a2: -r2 * self.a2,
                theta: -self.theta,
                eta: -self.eta,
                swap: false,
            }
        }
    }

    /// Denominator `1 - conj(a1) x1 - conj(a2) x2 + conj(a1 a2) x3`.
    pub fn denominator(&self, x: &Point3) -> Complex64 {
        let (b1, b2) = (self.a1.conj(), self.a2.conj());
        ONE - b1 * x.z1 - b2 * x.z2 + b1 * b2 * x.z3
    }

    /// The automorphism in coordinates, over any commutative ring containing the scalars.
    pub fn apply_coordinates<T: AutScalar>(&self, x1: T, x2: T, x3: T) -> [T; 3] {
        let (a1, a2) = (self.a1, self.a2);
        let (b1, b2) = (a1.conj(), a2.conj());
        let k = T::from(Complex64::new((1.0 - a1.norm_sqr()) * (1.0 - a2.norm_sqr()), 0.0));
        let c = |z: Complex64| T::from(z);
        let delta = c(ONE) - c(b1) * x1.clone() - c(b2) * x2.clone() + c(b1 * b2) * x3.clone();
        let p11 = x1.clone() - c(a1) + c(a1 * b2) * x2.clone() - c(b2) * x3.clone();
        let p22 = x2.clone() - c(a2) + c(a2 * b1) * x1.clone() - c(b1) * x3.clone();
        let defect = x1 * x2 - x3;
        let det = (p11.clone() * p22.clone() - defect * k) / (delta.clone() * delta.clone());
        let f11 = p11 / delta.clone();
        let f22 = p22 / delta;
        let (r1, r2, r12) = (unit(2.0 * self.theta), unit(2.0 * self.eta), unit(2.0 * (self.theta + self.eta)));
        if self.swap {
            [c(r1) * f22, c(r2) * f11, c(r12) * det]
        } else {
            [c(r1) * f11, c(r2) * f22, c(r12) * det]
        }
    }

    /// The automorphism applied to a rational disc, as a rational disc.
    pub fn compose_disc(&self, f: &DiscMap, tol: &Tolerances) -> Result<DiscMap> {
        if f.dim() != 3 {
            return Err(Error::Parameter("automorphisms act on discs in C^3".into()));
        }
        let c = f.components();
        let [g1, g2, g3] = self.apply_coordinates(c[0].clone(), c[1].clone(), c[2].clone());
        DiscMap::new(vec![g1, g2, g3], tol)
    }
}

/// Scalars on which the coordinate formula of a tetrablock automorphism can be evaluated.
pub trait AutScalar:
    Clone
    + From<Complex64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl AutScalar for Complex64 {}
impl AutScalar for Rational {}

/// `psi(z)` for the automorphism with parameters `p`: lift `z` to a symmetric
/// matrix, apply `U Phi_a U^t`, project by `pi`.
///
/// Accepts the closure of the tetrablock (margin above `-tol.boundary`). Both
/// lifts are evaluated; disagreement is reported as a contradiction.
pub fn aut_tetrablock(p: &TetraAutParams, z: &Point3, tol: &Tolerances) -> Result<Point3> {
    p.validate()?;
    let m = in_tetrablock(z).margin;
    if !(m > -tol.boundary) {
        return Err(Error::Domain(format!("point is outside the tetrablock (margin {m:e})")));
    }
    let [plus, minus] = symmetric_preimages(z);
    let a = project_pi(&p.matrix_map(&plus)?);
    let b = project_pi(&p.matrix_map(&minus)?);
    let scale = 1.0f64.max(a.to_array().iter().map(|v| v.norm()).fold(0.0, f64::max));
    if a.max_abs_diff(&b) > 1e-10 * scale {
        return Err(Error::Contradiction(format!(
            "preimage branches disagree by {:e}",
            a.max_abs_diff(&b)
        )));
    }
    Ok(a)
}

/// The factor relating `psi1 psi2 - psi3` to `x1 x2 - x3`:
/// `e^{2i(eta + theta)} (1 - |a1|^2)(1 - |a2|^2) / (1 - conj(a1) x1 - conj(a2) x2 + conj(a1 a2) x3)^2`.
pub fn nu_factor(p: &TetraAutParams, x: &Point3, tol: &Tolerances) -> Result<Complex64> {
    p.validate()?;
    let delta = p.denominator(x);
    if delta.norm() < tol.singular {
        return Err(Error::Contradiction(format!(
            "automorphism denominator vanishes ({:e}) at a point of the tetrablock",
            delta.norm()
        )));
    }
    let k = (1.0 - p.a1.norm_sqr()) * (1.0 - p.a2.norm_sqr());
    Ok(unit(2.0 * (p.theta + p.eta)) * k / (delta * delta))
}

/// `Psi_z(x) = (z x3 - x1) / (1 - z x2)`, a map of the tetrablock into the disc for `|z| <= 1`.
pub fn psi_z(zparam: Complex64, x: &Point3, tol: &Tolerances) -> Result<Complex64> {
    if !(zparam.norm() <= 1.0 + 1e-12) {
        return Err(Error::Parameter(format!("|z| = {} exceeds 1", zparam.norm())));
    }
    let den = ONE - zparam * x.z2;
    if den.norm() < tol.singular {
        return Err(Error::Contradiction(format!("1 - z x2 = {den} vanishes")));
    }
    Ok((zparam * x.z3 - x.z1) / den)
}

/// `F_a(s, p) = (2 a p - s) / (2 - a s)`.
pub fn f_a(a: Complex64, s: Complex64, p: Complex64, tol: &Tolerances) -> Result<Complex64> {
    if (a.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("a must be unimodular, |a| = {}", a.norm())));
    }
    let den = 2.0 * ONE - a * s;
    if den.norm() < tol.singular {
        return Err(Error::Singularity(format!("2 - a s = {den}")));
    }
    Ok((2.0 * a * p - s) / den)
}

/// `(s, p) -> (s/2, s/2, p)`, the embedding of the symmetrized bidisc.
pub fn embed_g2(s: Complex64, p: Complex64) -> Result<Point3> {
    let z = Point3::new(s / 2.0, s / 2.0, p);
    let m = in_tetrablock(&z).margin;
    if in_symmetrized_bidisc(s, p).inside && !(m > 0.0) {
        return Err(Error::Contradiction(format!("embedded point has margin {m:e}")));
    }
    if !(m > 0.0) {
        return Err(Error::Domain(format!("({s}, {p}) is not in the symmetrized bidisc")));
    }
    Ok(z)
}
