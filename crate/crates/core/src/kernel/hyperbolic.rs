use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Poincaré distance on the unit disc, `artanh |(a - b) / (1 - conj(b) a)|`.
pub fn poincare(a: Complex64, b: Complex64) -> Result<f64> {
    if !(a.norm() < 1.0 && b.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "poincare distance needs points in the open disc, got {a} and {b}"
        )));
    }
    Ok(mobius_pseudodistance(a, b).atanh())
}

/// `|(a - b) / (1 - conj(b) a)|`, defined for `a, b` in the open disc.
pub fn mobius_pseudodistance(a: Complex64, b: Complex64) -> f64 {
    ((a - b) / (Complex64::new(1.0, 0.0) - b.conj() * a)).norm().min(1.0)
}

/// A disc automorphism `lambda -> rotation * (lambda - zero) / (1 - conj(zero) lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mobius {
    pub rotation: Complex64,
    pub zero: Complex64,
}

impl Mobius {
    pub fn new(zero: Complex64, rotation: Complex64) -> Result<Self> {
        if !(zero.norm() < 1.0) {
            return Err(Error::Parameter(format!(
                "Möbius zero must lie in the open disc, got {zero}"
            )));
        }
        if ((rotation.norm() - 1.0).abs()) > 1e-12 {
            return Err(Error::Parameter(format!(
                "Möbius rotation must be unimodular, got |{rotation}| = {}",
                rotation.norm()
            )));
        }
        Ok(Self { rotation, zero })
    }

    pub fn identity() -> Self {
        Self {
            rotation: Complex64::new(1.0, 0.0),
            zero: Complex64::new(0.0, 0.0),
        }
    }

    /// Recovers the automorphism from its value and derivative at the origin.
    ///
    /// For `h(l) = w (l - p) / (1 - conj(p) l)` one has `h(0) = -w p` and
    /// `h'(0) = w (1 - |p|^2)`.
    pub fn from_origin_jet(value: Complex64, derivative: Complex64) -> Result<Self> {
        if derivative.norm() == 0.0 {
            return Err(Error::Degenerate("zero derivative at the origin".into()));
        }
        let rotation = derivative / derivative.norm();
        Self::new(-value / rotation, rotation)
    }

    pub fn eval(&self, l: Complex64) -> Complex64 {
        self.rotation * (l - self.zero) / (Complex64::new(1.0, 0.0) - self.zero.conj() * l)
    }

    pub fn derivative(&self, l: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.zero.conj() * l;
        self.rotation * (1.0 - self.zero.norm_sqr()) / (d * d)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Mobius) -> Self {
        let at0 = inner.eval(Complex64::new(0.0, 0.0));
        let value = self.eval(at0);
        let derivative = self.derivative(at0) * inner.derivative(Complex64::new(0.0, 0.0));
        let rotation = derivative / derivative.norm();
        Self { rotation, zero: -value / rotation }
    }

    pub fn inverse(&self) -> Self {
        Self {
            rotation: self.rotation.conj(),
            zero: -self.rotation * self.zero,
        }
    }
}

/// `tau (lambda - gamma) / (1 - conj(gamma) lambda)`.
pub fn mobius(gamma: Complex64, tau: Complex64, lambda: Complex64) -> Result<Complex64> {
    Ok(Mobius::new(gamma, tau)?.eval(lambda))
}
