use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A 2x2 complex matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e11: Complex64,
    pub e12: Complex64,
    pub e21: Complex64,
    pub e22: Complex64,
}

impl Mat2 {
    pub const fn new(e11: Complex64, e12: Complex64, e21: Complex64, e22: Complex64) -> Self {
        Self { e11, e12, e21, e22 }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(a, z, z, b)
    }

    /// `(0 upper; lower 0)`.
    pub fn anti_diag(upper: Complex64, lower: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, upper, lower, z)
    }

    pub fn symmetric(a: Complex64, off: Complex64, b: Complex64) -> Self {
        Self::new(a, off, off, b)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.e11, self.e12, self.e21, self.e22]
    }

    pub fn det(&self) -> Complex64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    pub fn trace(&self) -> Complex64 {
        self.e11 + self.e22
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.e11, self.e21, self.e12, self.e22)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.e11.conj(), self.e12.conj(), self.e21.conj(), self.e22.conj())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.e11 * s, self.e12 * s, self.e21 * s, self.e22 * s)
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let inv = d.inv();
        Some(Self::new(self.e22 * inv, -self.e12 * inv, -self.e21 * inv, self.e11 * inv))
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries().iter().map(|e| e.norm_sqr()).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|e| e.is_finite())
    }

    /// Operator (spectral) norm.
    ///
    /// `||M||^2 = (t + sqrt(t^2 - 4 |det M|^2)) / 2` with `t = sum |m_ij|^2`. The
    /// discriminant is evaluated as `(p - s)^2 + 4 |q|^2` where `M* M = (p q; q̄ s)`,
    /// which is the same quantity written as a sum of squares, so matrices with
    /// nearly equal singular values (unitaries in particular) do not lose half
    /// their digits to cancellation.
    pub fn op_norm(&self) -> f64 {
        let p = self.e11.norm_sqr() + self.e21.norm_sqr();
        let s = self.e12.norm_sqr() + self.e22.norm_sqr();
        let q = self.e11.conj() * self.e12 + self.e21.conj() * self.e22;
        let gap = ((p - s) * (p - s) + 4.0 * q.norm_sqr()).sqrt();
        (0.5 * (p + s + gap)).sqrt()
    }

    /// Smallest singular value.
    pub fn min_singular(&self) -> f64 {
        let top = self.op_norm();
        if top == 0.0 {
            0.0
        } else {
            self.det().norm() / top
        }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.e12 - self.e21).norm() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (*self * self.adjoint() - Self::identity()).max_abs() <= tol
    }

    /// Principal square root of a Hermitian positive semidefinite matrix.
    ///
    /// Uses `sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H))`. Returns
    /// `None` if `H` is not (numerically) Hermitian PSD.
    pub fn hermitian_sqrt(&self) -> Option<Self> {
        let scale = self.max_abs().max(1.0);
        if (self.e12 - self.e21.conj()).norm() > 1e-12 * scale
            || self.e11.im.abs() > 1e-12 * scale
            || self.e22.im.abs() > 1e-12 * scale
        {
            return None;
        }
        let det = self.det().re;
        let tr = self.e11.re + self.e22.re;
        if det < -1e-14 * scale * scale || tr < 0.0 {
            return None;
        }
        let s = det.max(0.0).sqrt();
        let t = (tr + 2.0 * s).sqrt();
        if t == 0.0 {
            return Some(Self::zero());
        }
        let shifted = *self + Self::identity().scale(Complex64::new(s, 0.0));
        Some(shifted.scale(Complex64::new(1.0 / t, 0.0)))
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.e11 + o.e11, self.e12 + o.e12, self.e21 + o.e21, self.e22 + o.e22)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.e11 - o.e11, self.e12 - o.e12, self.e21 - o.e21, self.e22 - o.e22)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.e11, -self.e12, -self.e21, -self.e22)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.e11 * o.e11 + self.e12 * o.e21,
            self.e11 * o.e12 + self.e12 * o.e22,
            self.e21 * o.e11 + self.e22 * o.e21,
            self.e21 * o.e12 + self.e22 * o.e22,
        )
    }
}

impl Mul<Complex64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: Complex64) -> Mat2 {
        self.scale(s)
    }
}

// JSON form: [[e11, e12], [e21, e22]] with each entry an [re, im] pair.
impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [[self.e11, self.e12], [self.e21, self.e22]].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [[e11, e12], [e21, e22]] = <[[Complex64; 2]; 2]>::deserialize(deserializer)?;
        Ok(Mat2::new(e11, e12, e21, e22))
    }
}
