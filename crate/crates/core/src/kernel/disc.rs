use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::count_roots_in_disc;
use super::poly::{Poly, Rational};
use crate::config::Tolerances;
use crate::domains::Point3;
use crate::error::{Error, Result};

/// A rational map of the closed unit disc into `C^n`.
///
/// Each coordinate is a [`Rational`]; construction certifies that no
/// denominator vanishes on `|lambda| <= 1 + tol.den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct DiscMap {
    components: Vec<Rational>,
}

impl DiscMap {
    pub fn new(components: Vec<Rational>, tol: &Tolerances) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parameter("a disc needs at least one coordinate".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.den.is_zero(0.0) {
                return Err(Error::Parameter(format!("coordinate {i} has a zero denominator")));
            }
            let coeffs_finite = c
                .num
                .coeffs()
                .iter()
                .chain(c.den.coeffs())
                .all(|z| z.is_finite());
            if !coeffs_finite {
                return Err(Error::Parameter(format!("coordinate {i} has non-finite coefficients")));
            }
            if c.den.degree() > 0 {
                let den = c.den.clone();
                let n = count_roots_in_disc(|z| den.eval(z), 1.0 + tol.den, tol.contour)
                    .map_err(|e| match e {
                        Error::Contour { .. } => Error::Parameter(format!(
                            "denominator of coordinate {i} nearly vanishes on |z| = 1 + {}",
                            tol.den
                        )),
                        other => other,
                    })?;
                if n > 0 {
                    return Err(Error::Parameter(format!(
                        "denominator of coordinate {i} has {n} zero(s) in the closed disc"
                    )));
                }
            }
        }
        Ok(Self { components })
    }

    /// Polynomial coordinates, each given by ascending coefficients.
    pub fn polynomial(coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::new(
            coeffs.into_iter().map(|c| Rational::from_poly(Poly::new(c))).collect(),
            &Tolerances::default(),
        )
    }

    /// A constant map.
    pub fn constant(values: &[Complex64]) -> Self {
        Self {
            components: values.iter().map(|&v| Rational::constant(v)).collect(),
        }
    }

    pub fn scalar(f: Rational, tol: &Tolerances) -> Result<Self> {
        Self::new(vec![f], tol)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Rational {
        &self.components[i]
    }

    pub fn eval(&self, l: Complex64) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eval(l)).collect()
    }

    fn require_three(&self) -> Result<()> {
        if self.dim() != 3 {
            return Err(Error::Parameter(format!(
                "expected a disc in C^3, got {} coordinates",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn eval3(&self, l: Complex64) -> Result<Point3> {
        self.require_three()?;
        let c = &self.components;
        Ok(Point3::new(c[0].eval(l), c[1].eval(l), c[2].eval(l)))
    }

    /// `f1 f2 - f3` as a rational function.
    pub fn triangular_defect(&self) -> Result<Rational> {
        self.require_three()?;
        let c = &self.components;
        Ok(&(&c[0] * &c[1]) - &c[2])
    }
}

impl TryFrom<Vec<Rational>> for DiscMap {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        Self::new(v, &Tolerances::default())
    }
}

impl From<DiscMap> for Vec<Rational> {
    fn from(d: DiscMap) -> Self {
        d.components
    }
}
