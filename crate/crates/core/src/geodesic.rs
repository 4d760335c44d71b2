//! The extremal disc families of the tetrablock, the Cohn criterion and the
//! avoidance test for the triangular set.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::{project_pi, Point3};
use crate::error::{Error, Result};
use crate::kernel::{vanishing_order, DiscMap, Mat2, Poly, Rational};
use crate::transforms::phi_c_lower;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Slack used by [`avoids_t`] at the boundary of the avoidance region.
pub const AVOIDANCE_SLACK: f64 = 1e-10;

fn default_mu() -> Complex64 {
    ONE
}

/// `lambda -> U diag(lambda, Z(lambda)) V` followed by `phi_c` and `pi`,
/// with `Z(lambda) = lambda` or `mu lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangularSpec {
    pub u: Mat2,
    pub v: Mat2,
    pub c: Complex64,
    #[serde(default = "default_mu")]
    pub mu: Complex64,
    pub z_is_identity: bool,
}

/// The second diagonal entry of a geodesic of the matrix ball through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZMap {
    Identity,
    Linear(Complex64),
}

impl ZMap {
    pub fn eval(&self, l: Complex64) -> Complex64 {
        match *self {
            ZMap::Identity => l,
            ZMap::Linear(mu) => mu * l,
        }
    }

    fn slope(&self) -> Complex64 {
        match *self {
            ZMap::Identity => ONE,
            ZMap::Linear(mu) => mu,
        }
    }
}

/// `U diag(lambda, Z(lambda)) V`.
pub fn cartan_geodesic(u: &Mat2, v: &Mat2, z: ZMap, lambda: Complex64, tol_unit: f64) -> Result<Mat2> {
    if !u.is_unitary(tol_unit) || !v.is_unitary(tol_unit) {
        return Err(Error::Parameter("U and V must be unitary".into()));
    }
    if let ZMap::Linear(mu) = z {
        if mu.norm() > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!("|mu| = {} exceeds 1", mu.norm())));
        }
    }
    Ok(*u * Mat2::diag(lambda, z.eval(lambda)) * *v)
}

impl TriangularSpec {
    pub fn zmap(&self) -> ZMap {
        if self.z_is_identity {
            ZMap::Identity
        } else {
            ZMap::Linear(self.mu)
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        if !self.u.is_unitary(tol.unit) || !self.v.is_unitary(tol.unit) {
            return Err(Error::Parameter("U and V must be unitary".into()));
        }
        if !(self.c.norm() < 1.0) {
            return Err(Error::Parameter(format!("|c| = {} is not below 1", self.c.norm())));
        }
        if !self.z_is_identity && !(self.mu.norm() < 1.0) {
            return Err(Error::Parameter(format!(
                "Z(lambda) = mu lambda needs |mu| < 1, got {}",
                self.mu.norm()
            )));
        }
        Ok(())
    }

    /// `K = U diag(1, Z'(0)) V`, so that the matrix disc is `K lambda`.
    pub fn slope_matrix(&self) -> Mat2 {
        self.u * Mat2::diag(ONE, self.zmap().slope()) * self.v
    }

    pub fn eval(&self, lambda: Complex64, tol: &Tolerances) -> Result<Point3> {
        let x = cartan_geodesic(&self.u, &self.v, self.zmap(), lambda, tol.unit)?;
        Ok(project_pi(&phi_c_lower(self.c, &x, tol)?))
    }

    /// The disc as a rational map:
    /// `(s k11 l, s k22 l, det K l^2 + c k12 l) / (1 - conj(c) k21 l)`, `s = sqrt(1 - |c|^2)`.
    pub fn disc(&self, tol: &Tolerances) -> Result<DiscMap> {
        self.validate(tol)?;
        let k = self.slope_matrix();
        let s = (1.0 - self.c.norm_sqr()).sqrt();
        let den = Poly::new(vec![ONE, -self.c.conj() * k.e21]);
        let r = |coeffs: Vec<Complex64>| Rational::new(Poly::new(coeffs), den.clone());
        DiscMap::new(
            vec![
                r(vec![ZERO, k.e11 * s]),
                r(vec![ZERO, k.e22 * s]),
                r(vec![ZERO, self.c * k.e12, k.det()]),
            ],
            tol,
        )
    }
}

/// The non-triangular family built from the rows `(a, b)`, `(c, d)` of a
/// unitary, `beta` in `(0, 1)` and `Z(lambda) = mu lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonTriangularSpec {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub mu: Complex64,
    pub beta: f64,
}

/// The polynomials `A`, `B`, `C`, `Delta` of a non-triangular spec.
#[derive(Debug, Clone, PartialEq)]
pub struct AbcDelta {
    pub a: Poly,
    pub b: Poly,
    pub c: Poly,
    pub delta: Poly,
}

impl NonTriangularSpec {
    pub fn validate(&self, tol_rows: f64) -> Result<()> {
        let Self { a, b, c, d, mu, beta } = *self;
        let r1 = a.norm_sqr() + b.norm_sqr() - 1.0;
        let r2 = c.norm_sqr() + d.norm_sqr() - 1.0;
        let orth = (a * c.conj() + b * d.conj()).norm();
        if r1.abs() > tol_rows || r2.abs() > tol_rows || orth > tol_rows {
            return Err(Error::Parameter(format!(
                "(a, b), (c, d) are not orthonormal: {r1:e}, {r2:e}, {orth:e}"
            )));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Parameter(format!("beta = {beta} is not in (0, 1)")));
        }
        if !(mu.norm() <= 1.0 + 1e-12) {
            return Err(Error::Parameter(format!("|mu| = {} exceeds 1", mu.norm())));
        }
        Ok(())
    }

    /// `A = (a^2 + b^2 mu) l`, `B = (ac + bd mu) l`, `C = (c^2 + d^2 mu) l`,
    /// `Delta = (1 + beta B)^2 - A C beta^2`.
    pub fn abc_delta(&self) -> AbcDelta {
        let Self { a, b, c, d, mu, beta } = *self;
        let pa = Poly::new(vec![ZERO, a * a + b * b * mu]);
        let pb = Poly::new(vec![ZERO, a * c + b * d * mu]);
        let pc = Poly::new(vec![ZERO, c * c + d * d * mu]);
        let one_plus = &Poly::one() + &pb.scale(beta.into());
        let delta = &(&one_plus * &one_plus) - &(&pa * &pc).scale((beta * beta).into());
        AbcDelta { a: pa, b: pb, c: pc, delta }
    }

    pub fn eval(&self, lambda: Complex64, tol: &Tolerances) -> Result<Point3> {
        let Self { a, b, c, d, mu, beta } = *self;
        let ca = (a * a + b * b * mu) * lambda;
        let cb = (a * c + b * d * mu) * lambda;
        let cc = (c * c + d * d * mu) * lambda;
        let delta = (ONE + beta * cb) * (ONE + beta * cb) - ca * cc * beta * beta;
        if delta.norm() < tol.singular {
            return Err(Error::Singularity(format!("Delta({lambda}) = {delta}")));
        }
        let k = 1.0 - beta * beta;
        Ok(Point3::new(
            ca * k / delta,
            cc * k / delta,
            (ca * cc - (cb + beta) * (cb + beta)) / delta,
        ))
    }

    pub fn disc(&self, tol: &Tolerances) -> Result<DiscMap> {
        self.validate(1e-10)?;
        let AbcDelta { a, b, c, delta } = self.abc_delta();
        let k = Complex64::from(1.0 - self.beta * self.beta);
        let shifted = &b + &Poly::constant(self.beta.into());
        let f3 = &(&a * &c) - &(&shifted * &shifted);
        DiscMap::new(
            vec![
                Rational::new(a.scale(k), delta.clone()),
                Rational::new(c.scale(k), delta.clone()),
                Rational::new(f3, delta),
            ],
            tol,
        )
        .map_err(|e| match e {
            Error::Parameter(m) => Error::Singularity(m),
            other => other,
        })
    }

    /// Coefficients `(a0, a1, a2)` of `a0 l^2 + a1 l + a2`, whose roots are the
    /// parameters where the disc meets the triangular set.
    pub fn avoidance_quadratic(&self) -> [Complex64; 3] {
        let Self { a, b, c, d, mu, beta } = *self;
        let det = a * d - b * c;
        [
            beta * mu * det * det,
            -(1.0 + beta * beta) * (a * c + mu * b * d),
            Complex64::from(-beta),
        ]
    }

    /// `beta - |c| |d| (1 + beta^2)`; non-negative exactly when the closed form admits the spec.
    pub fn closed_form_slack(&self) -> f64 {
        self.beta - self.c.norm() * self.d.norm() * (1.0 + self.beta * self.beta)
    }
}

/// One of the extremal disc families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicSpec {
    /// `f(lambda) = (0, 0, e^{i theta} lambda)`.
    Trivial { theta: f64 },
    /// `f = (f1, f2, f1 f2)`.
    InsideT { f1: DiscMap, f2: DiscMap },
    Triangular(TriangularSpec),
    NonTriangular(NonTriangularSpec),
}

impl GeodesicSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            GeodesicSpec::Trivial { .. } => "trivial",
            GeodesicSpec::InsideT { .. } => "inside_t",
            GeodesicSpec::Triangular(_) => "triangular",
            GeodesicSpec::NonTriangular(_) => "non_triangular",
        }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        match self {
            GeodesicSpec::Trivial { theta } if !theta.is_finite() => {
                Err(Error::Parameter("theta must be finite".into()))
            }
            GeodesicSpec::Trivial { .. } => Ok(()),
            GeodesicSpec::InsideT { f1, f2 } if f1.dim() != 1 || f2.dim() != 1 => {
                Err(Error::Parameter("inside_t needs scalar f1 and f2".into()))
            }
            GeodesicSpec::InsideT { .. } => Ok(()),
            GeodesicSpec::Triangular(s) => s.validate(tol),
            GeodesicSpec::NonTriangular(s) => s.validate(1e-10),
        }
    }

    pub fn eval(&self, lambda: Complex64, tol: &Tolerances) -> Result<Point3> {
        match self {
            GeodesicSpec::Trivial { theta } => {
                Ok(Point3::new(ZERO, ZERO, Complex64::from_polar(1.0, *theta) * lambda))
            }
            GeodesicSpec::InsideT { f1, f2 } => {
                let (x, y) = (f1.eval(lambda)[0], f2.eval(lambda)[0]);
                Ok(Point3::new(x, y, x * y))
            }
            GeodesicSpec::Triangular(s) => s.eval(lambda, tol),
            GeodesicSpec::NonTriangular(s) => s.eval(lambda, tol),
        }
    }

    pub fn disc(&self, tol: &Tolerances) -> Result<DiscMap> {
        self.validate(tol)?;
        match self {
            GeodesicSpec::Trivial { theta } => DiscMap::new(
                vec![
                    Rational::constant(ZERO),
                    Rational::constant(ZERO),
                    Rational::from_poly(Poly::new(vec![ZERO, Complex64::from_polar(1.0, *theta)])),
                ],
                tol,
            ),
            GeodesicSpec::InsideT { f1, f2 } => {
                let (g1, g2) = (f1.component(0), f2.component(0));
                DiscMap::new(vec![g1.clone(), g2.clone(), g1 * g2], tol)
            }
            GeodesicSpec::Triangular(s) => s.disc(tol),
            GeodesicSpec::NonTriangular(s) => s.disc(tol),
        }
    }
}

/// Whether both roots of `a0 l^2 + a1 l + a2` lie in `|l| >= 1`.
///
/// A vanishing `a0` drops the degree and the missing root counts as outside.
/// When `|a0| = |a2|` the roots have unimodular product, so both are outside
/// only if both lie on the circle; this is decided by the self-inversive test
/// `conj(a0) a1 = a2 conj(a1)`, `|a1| <= 2 |a0|` rather than by the general
/// inequality, which also holds for some reciprocal root pairs.
pub fn cohn_both_roots_outside(a0: Complex64, a1: Complex64, a2: Complex64) -> Result<bool> {
    cohn_with_slack(a0, a1, a2, 0.0)
}

/// [`cohn_both_roots_outside`] with the inequalities relaxed by `slack`
/// (relative to the largest coefficient).
pub fn cohn_with_slack(a0: Complex64, a1: Complex64, a2: Complex64, slack: f64) -> Result<bool> {
    let scale = a0.norm().max(a1.norm()).max(a2.norm());
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::Degenerate("quadratic with no usable coefficients".into()));
    }
    let (b0, b1, b2) = (a0 / scale, a1 / scale, a2 / scale);
    const NEGLIGIBLE: f64 = 1e-14;
    const TIE: f64 = 1e-12;
    if b0.norm() <= NEGLIGIBLE {
        if b1.norm() <= NEGLIGIBLE {
            return Ok(true);
        }
        return Ok(b2.norm() >= b1.norm() - slack);
    }
    let gap = b2.norm_sqr() - b0.norm_sqr();
    let lhs = (b0.conj() * b1 - b2 * b1.conj()).norm();
    if gap > TIE {
        Ok(lhs <= gap + slack)
    } else if gap < -TIE {
        Ok(false)
    } else {
        Ok(lhs <= slack.max(1e-10) && b1.norm() <= 2.0 * b0.norm() + slack)
    }
}

/// Outcome of [`avoids_t`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Avoidance {
    /// No parameter in the open disc is mapped to the triangular set (Cohn verdict).
    pub avoids: bool,
    /// `|c| |d| (1 + beta^2) <= beta`.
    pub closed_form: bool,
}

/// Decides whether the non-triangular disc misses the triangular set.
///
/// The closed form is compared with the Cohn verdict whenever `|mu| < 1` and
/// the spec is not within [`AVOIDANCE_SLACK`] of the boundary case; for
/// `|mu| = 1` the closed form is reported but not enforced.
pub fn avoids_t(s: &NonTriangularSpec) -> Result<Avoidance> {
    s.validate(1e-10)?;
    let [a0, a1, a2] = s.avoidance_quadratic();
    let avoids = cohn_with_slack(a0, a1, a2, AVOIDANCE_SLACK)?;
    let slack = s.closed_form_slack();
    let closed_form = slack >= -AVOIDANCE_SLACK;
    if s.mu.norm() < 1.0 - 1e-12 && slack.abs() > AVOIDANCE_SLACK && avoids != closed_form {
        return Err(Error::Contradiction(format!(
            "Cohn verdict {avoids} disagrees with the closed form (slack {slack:e})"
        )));
    }
    Ok(Avoidance { avoids, closed_form })
}

/// Value of `nu(f)(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nu {
    Order(u32),
    /// `f1 f2 - f3` vanishes identically: the disc lies in the triangular set.
    InsideT,
}

/// Order of vanishing of `f1 f2 - f3` at `lambda0`.
pub fn nu_of_disc(f: &DiscMap, lambda0: Complex64, tol: &Tolerances) -> Result<Nu> {
    let defect = f.triangular_defect()?;
    if defect.is_zero(1e-13) {
        return Ok(Nu::InsideT);
    }
    vanishing_order(&defect, lambda0, tol).map(Nu::Order)
}
