use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;

use super::poly::Rational;
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Initial number of contour nodes.
pub const CONTOUR_POINTS: usize = 2048;
const MAX_CONTOUR_POINTS: usize = 1 << 17;

/// Roots closer than this to the evaluation point count as sitting on it.
const ROOT_CLUSTER: f64 = 1e-3;

/// Samples of a function on a circle together with the winding number they certify.
#[derive(Debug, Clone)]
pub struct ContourTrace {
    pub center: Complex64,
    pub radius: f64,
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub winding: i64,
}

impl ContourTrace {
    /// `(1 / 2 pi i) \oint lambda f'/f`, i.e. the sum of the enclosed zeros
    /// minus poles, from the stored samples.
    pub fn first_moment(&self) -> Complex64 {
        let n = self.points.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let j = (k + 1) % n;
            let dlog = (self.values[j] / self.values[k]).ln();
            acc += 0.5 * (self.points[k] + self.points[j]) * dlog;
        }
        acc / Complex64::new(0.0, TAU)
    }
}

/// Winding number of `f` along the circle `|lambda - center| = radius`.
///
/// The argument increments between consecutive nodes are accumulated; the node
/// count starts at [`CONTOUR_POINTS`] and doubles while any single increment
/// exceeds `pi/4` or the total is more than `0.25` away from an integer. A
/// minimum modulus below `tol_contour` times the maximum modulus on the circle
/// is reported as [`Error::Contour`] so the caller can perturb the radius.
pub fn trace_winding<F: Fn(Complex64) -> Complex64>(
    f: F,
    center: Complex64,
    radius: f64,
    tol_contour: f64,
) -> Result<ContourTrace> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter(format!("contour radius must be positive, got {radius}")));
    }
    let mut n = CONTOUR_POINTS;
    loop {
        let points: Vec<Complex64> = (0..n)
            .map(|k| center + Complex64::from_polar(radius, TAU * k as f64 / n as f64))
            .collect();
        let values: Vec<Complex64> = points.iter().map(|&z| f(z)).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Singularity(format!(
                "non-finite value on the contour of radius {radius} about {center}"
            )));
        }
        let (min_mod, max_mod) = values
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v.norm()), hi.max(v.norm())));
        if max_mod == 0.0 || min_mod < tol_contour * max_mod {
            return Err(Error::Contour { radius, min_modulus: min_mod });
        }
        let mut total = 0.0;
        let mut widest = 0.0f64;
        for k in 0..n {
            let step = (values[(k + 1) % n] / values[k]).arg();
            total += step;
            widest = widest.max(step.abs());
        }
        let turns = total / TAU;
        let snapped = turns.round();
        if widest <= FRAC_PI_4 && (turns - snapped).abs() < 0.25 {
            return Ok(ContourTrace {
                center,
                radius,
                points,
                values,
                winding: snapped as i64,
            });
        }
        if n >= MAX_CONTOUR_POINTS {
            return Err(Error::Contour { radius, min_modulus: min_mod });
        }
        n *= 2;
    }
}

pub fn winding_number<F: Fn(Complex64) -> Complex64>(
    f: F,
    center: Complex64,
    radius: f64,
    tol_contour: f64,
) -> Result<i64> {
    trace_winding(f, center, radius, tol_contour).map(|t| t.winding)
}

/// Number of zeros of a holomorphic `f` in `|lambda| < radius`, with multiplicity.
pub fn count_roots_in_disc<F: Fn(Complex64) -> Complex64>(
    f: F,
    radius: f64,
    tol_contour: f64,
) -> Result<u32> {
    let w = winding_number(f, Complex64::new(0.0, 0.0), radius, tol_contour)?;
    u32::try_from(w).map_err(|_| {
        Error::Contradiction(format!(
            "negative winding {w} on radius {radius}: the function has poles inside"
        ))
    })
}

/// Order of the zero of `f` at `at` (0 if `f(at) != 0`).
///
/// The order is the winding number of `f` on a small circle about `at`. Its
/// radius is half the distance to the nearest other zero or pole (found with
/// [`super::Poly::roots`]), capped at `0.1`.
pub fn vanishing_order(f: &Rational, at: Complex64, tol: &Tolerances) -> Result<u32> {
    if f.is_zero(1e-14) {
        return Err(Error::Degenerate("function is identically zero".into()));
    }
    let nearest = f
        .num
        .roots()
        .into_iter()
        .chain(f.den.roots())
        .map(|r| (r - at).norm())
        .filter(|&d| d > ROOT_CLUSTER)
        .fold(f64::INFINITY, f64::min);
    let radius = (0.5 * nearest).min(0.1);
    if radius <= 1.5 * ROOT_CLUSTER {
        return Err(Error::Degenerate(format!(
            "zeros or poles within {nearest:e} of {at} cannot be separated"
        )));
    }
    let w = winding_number(|z| f.eval(z), at, radius, tol.contour)?;
    u32::try_from(w)
        .map_err(|_| Error::Precondition(format!("pole of order {} at {at}", -w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::kernel::Poly;

    #[test]
    fn simple_counts() {
        let tol = 1e-8;
        assert_eq!(count_roots_in_disc(|z| z, 1.0, tol).unwrap(), 1);
        assert_eq!(count_roots_in_disc(|z| z * z - 4.0, 1.0, tol).unwrap(), 0);
        assert_eq!(count_roots_in_disc(|z| z * z - 4.0, 3.0, tol).unwrap(), 2);
        assert_eq!(count_roots_in_disc(|z| z.powu(7), 0.5, tol).unwrap(), 7);
    }

    #[test]
    fn zero_on_contour_is_reported() {
        let err = count_roots_in_disc(|z| z - 1.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(err, Error::Contour { .. }));
    }

    #[test]
    fn poles_give_negative_winding() {
        let w = winding_number(|z| z.inv(), c64(0.0, 0.0), 1.0, 1e-8).unwrap();
        assert_eq!(w, -1);
        assert!(matches!(
            count_roots_in_disc(|z| z.inv(), 1.0, 1e-8),
            Err(Error::Contradiction(_))
        ));
    }

    #[test]
    fn first_moment_locates_a_single_root() {
        let root = c64(0.3, -0.45);
        let t = trace_winding(|z| (z - root) * (z + 3.0).exp(), c64(0.0, 0.0), 0.9, 1e-8).unwrap();
        assert_eq!(t.winding, 1);
        assert!((t.first_moment() - root).norm() < 1e-6);
    }

    #[test]
    fn vanishing_orders() {
        let tol = Tolerances::default();
        let sq = Rational::from_poly(Poly::monomial(c64(1.0, 0.0), 2));
        assert_eq!(vanishing_order(&sq, c64(0.0, 0.0), &tol).unwrap(), 2);
        let sigma = c64(0.4, 0.2);
        let lin = Rational::from_poly(Poly::from_roots(&[sigma], c64(1.0, 0.0)));
        assert_eq!(vanishing_order(&lin, sigma, &tol).unwrap(), 1);
        assert_eq!(vanishing_order(&lin, c64(0.0, 0.0), &tol).unwrap(), 0);
        assert!(matches!(
            vanishing_order(&Rational::constant(c64(0.0, 0.0)), sigma, &tol),
            Err(Error::Degenerate(_))
        ));
        let pole = lin.recip();
        assert!(matches!(vanishing_order(&pole, sigma, &tol), Err(Error::Precondition(_))));
    }
}
