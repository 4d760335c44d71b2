use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::count_roots_in_disc;
use super::poly::Rational;
use crate::config::Tolerances;
use crate::error::{Error, Result};

const PANELS: usize = 256;
const RICHARDSON_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// A holomorphic square root of a zero-free rational function on the closed disc.
#[derive(Debug, Clone)]
pub struct AnalyticSqrt {
    f: Rational,
    base: Complex64,
}

impl AnalyticSqrt {
    pub fn value_at_origin(&self) -> Complex64 {
        self.base
    }

    /// Evaluates the root at `l`, continuing radially from the origin.
    ///
    /// `log g(l) - log g(0) = 1/2 int_0^1 l f'(tl)/f(tl) dt` is estimated by
    /// composite Simpson; the returned value is whichever sign of the
    /// principal root of `f(l)` lies closer to that estimate, so it carries
    /// full precision once the branch is known.
    pub fn eval(&self, l: Complex64) -> Complex64 {
        let fl = self.f.eval(l);
        let root = fl.sqrt();
        if l.norm() == 0.0 {
            return if (root - self.base).norm() <= (root + self.base).norm() { root } else { -root };
        }
        let mut n = PANELS;
        let mut estimate = self.continue_to(l, n);
        loop {
            let coarse = self.continue_to(l, n / 2);
            if (estimate - coarse).norm() <= RICHARDSON_LIMIT * estimate.norm().max(1.0) || n >= 1 << 14 {
                break;
            }
            n *= 2;
            estimate = self.continue_to(l, n);
        }
        if (root - estimate).norm() <= (root + estimate).norm() {
            root
        } else {
            -root
        }
    }

    fn continue_to(&self, l: Complex64, panels: usize) -> Complex64 {
        let h = 1.0 / panels as f64;
        let integrand = |t: f64| l * self.f.log_derivative(l * t);
        let mut acc = integrand(0.0) + integrand(1.0);
        for k in 1..panels {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += integrand(k as f64 * h) * w;
        }
        let integral = acc * (h / 3.0);
        self.base * (0.5 * integral).exp()
    }
}

/// Square root `g` of `f` with `g(0) = branch * sqrt(f(0))` (principal root).
///
/// Requires `f` to have neither zeros nor poles on `|lambda| <= 1 + tol.den`.
pub fn analytic_sqrt(f: &Rational, branch: Branch, tol: &Tolerances) -> Result<AnalyticSqrt> {
    if f.is_zero(1e-14) {
        return Err(Error::Precondition("square root of the zero function".into()));
    }
    let radius = 1.0 + tol.den;
    for (part, p) in [("zero", &f.num), ("pole", &f.den)] {
        if p.degree() == 0 {
            continue;
        }
        let count = count_roots_in_disc(|z| p.eval(z), radius, tol.contour).map_err(|e| match e {
            Error::Contour { .. } => {
                Error::Precondition(format!("{part} of the radicand on or near the unit circle"))
            }
            other => other,
        })?;
        if count > 0 {
            return Err(Error::Precondition(format!(
                "radicand has {count} {part}(s) in the closed disc"
            )));
        }
    }
    Ok(AnalyticSqrt {
        f: f.clone(),
        base: f.eval(Complex64::new(0.0, 0.0)).sqrt() * branch.sign(),
    })
}
