use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![])
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// `c * x^k`.
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `lead * prod (x - r)`.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Self {
        roots.iter().fold(Self::constant(lead), |acc, &r| {
            &acc * &Self::new(vec![-r, ONE])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Index of the highest stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Number of leading (low-degree) coefficients with modulus at most `tol`.
    pub fn low_order(&self, tol: f64) -> usize {
        self.coeffs
            .iter()
            .position(|c| c.norm() > tol)
            .unwrap_or(self.coeffs.len())
    }

    /// Divides by `x^k`, discarding the `k` lowest coefficients.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).copied().collect())
    }

    /// Drops high-degree coefficients that are negligible relative to the largest one.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.max_abs_coeff();
        let mut v = self.coeffs.clone();
        while v.len() > 1 && v.last().is_some_and(|c| c.norm() <= cut) {
            v.pop();
        }
        Self::new(v)
    }

    /// All roots, by Aberth–Ehrlich simultaneous iteration.
    ///
    /// Leading coefficients below `1e-14` of the largest coefficient are
    /// discarded first. Multiple roots come back as clusters of radius roughly
    /// `eps^(1/k)`.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed(1e-14);
        let n = p.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = p.coeffs[n];
        let monic: Vec<Complex64> = p.coeffs.iter().map(|&c| c / lead).collect();
        if n == 1 {
            return vec![-monic[0]];
        }
        let p = Poly::new(monic);
        // Cauchy bound for the initial ring.
        let bound = 1.0
            + p.coeffs[..n]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
        let radius = bound.min(
            p.coeffs[0].norm().powf(1.0 / n as f64).max(1e-3),
        );
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        for _ in 0..500 {
            let mut max_step: f64 = 0.0;
            for i in 0..n {
                let (val, der) = p.eval_with_derivative(z[i]);
                if val == ZERO {
                    continue;
                }
                let ratio = val / der;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d = z[i] - z[j];
                        if d == ZERO {
                            ZERO
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let denom = ONE - ratio * repulsion;
                let step = if denom.norm() == 0.0 || !denom.is_finite() || !ratio.is_finite() {
                    ZERO
                } else {
                    ratio / denom
                };
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
            if max_step < 1e-15 {
                break;
            }
        }
        z
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&ZERO) + *o.coeffs.get(k).unwrap_or(&ZERO))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&ZERO) - *o.coeffs.get(k).unwrap_or(&ZERO))
                .collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut v = vec![ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(-ONE)
    }
}

macro_rules! forward_by_value {
    ($ty:ty, $($tr:ident :: $m:ident),+) => {$(
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty {
                (&self).$m(&o)
            }
        }
    )+};
}

forward_by_value!(Poly, Add::add, Sub::sub, Mul::mul);

/// A rational function `num / den`.
///
/// Arithmetic keeps numerator and denominator separate without cancelling
/// common factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    pub num: Poly,
    pub den: Poly,
}

impl Rational {
    pub fn new(num: Poly, den: Poly) -> Self {
        Self { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::new(p, Poly::one())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The identity map `x -> x`.
    pub fn identity() -> Self {
        Self::from_poly(Poly::monomial(ONE, 1))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// Value and derivative.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        (n / d, (dn * d - n * dd) / (d * d))
    }

    /// `f'/f = n'/n - d'/d`.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let (n, dn) = self.num.eval_with_derivative(z);
        let (d, dd) = self.den.eval_with_derivative(z);
        dn / n - dd / d
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.num.scale(s), self.den.clone())
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Numerator identically zero, relative to the coefficient scale.
    pub fn is_zero(&self, tol: f64) -> bool {
        self.num.is_zero(tol * self.den.max_abs_coeff().max(1.0))
    }

    /// Divides the numerator by `x^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.num.shift_down(k), self.den.clone())
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, o: &Rational) -> Rational {
        if self.den == o.den {
            return Rational::new(&self.num + &o.num, self.den.clone());
        }
        Rational::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, o: &Rational) -> Rational {
        if self.den == o.den {
            return Rational::new(&self.num - &o.num, self.den.clone());
        }
        Rational::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, o: &Rational) -> Rational {
        Rational::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, o: &Rational) -> Rational {
        Rational::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        self.scale(-ONE)
    }
}

forward_by_value!(Rational, Add::add, Sub::sub, Mul::mul, Div::div);

impl From<Complex64> for Rational {
    fn from(c: Complex64) -> Self {
        Rational::constant(c)
    }
}

impl From<Poly> for Rational {
    fn from(p: Poly) -> Self {
        Rational::from_poly(p)
    }
}
