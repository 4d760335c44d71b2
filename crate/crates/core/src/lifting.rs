//! Lifting discs of the tetrablock through `pi` to discs of matrices.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::project_pi;
use crate::error::{Error, Result};
use crate::kernel::{analytic_sqrt, vanishing_order, AnalyticSqrt, Branch, DiscMap, Mat2, Rational};
use crate::sampling::halton_disc;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Interior and boundary samples used for lift certificates.
const INTERIOR_SAMPLES: usize = 96;
const BOUNDARY_SAMPLES: usize = 64;
/// Radius at which the strict interior norm bound is checked.
const INTERIOR_RADIUS: f64 = 0.999;

/// `lambda -> (lambda^n g1, lambda^n w; lambda^m w, lambda^m g2)` with `w^2 = g1 g2 - g3`.
#[derive(Debug, Clone)]
pub struct MatrixDisc {
    g1: Rational,
    g2: Rational,
    root: AnalyticSqrt,
    n: u32,
    m: u32,
}

impl MatrixDisc {
    pub fn eval(&self, l: Complex64) -> Mat2 {
        let w = self.root.eval(l);
        let (pn, pm) = (l.powu(self.n), l.powu(self.m));
        Mat2::new(pn * self.g1.eval(l), pn * w, pm * w, pm * self.g2.eval(l))
    }

    pub fn orders(&self) -> (u32, u32) {
        (self.n, self.m)
    }
}

/// Sample-based certificate of a lift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftCertificate {
    /// Largest `max_j |pi(G(l))_j - f_j(l)|` over all samples.
    pub projection_residual: f64,
    /// Largest `|G(l)|` over the closed-disc samples.
    pub max_norm: f64,
    /// Largest `|G(l)|` over samples with `|l| <= 0.999`.
    pub max_interior_norm: f64,
    pub samples: usize,
}

#[derive(Debug, Clone)]
pub struct LiftResult {
    pub disc: MatrixDisc,
    pub certificate: LiftCertificate,
}

fn certify(f: &DiscMap, g: &MatrixDisc) -> LiftCertificate {
    let interior = halton_disc(INTERIOR_SAMPLES, INTERIOR_RADIUS);
    let boundary: Vec<Complex64> = (0..BOUNDARY_SAMPLES)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / BOUNDARY_SAMPLES as f64))
        .collect();
    let mut cert = LiftCertificate {
        projection_residual: 0.0,
        max_norm: 0.0,
        max_interior_norm: 0.0,
        samples: interior.len() + boundary.len(),
    };
    for (l, inside) in interior.iter().map(|&l| (l, true)).chain(boundary.iter().map(|&l| (l, false))) {
        let x = g.eval(l);
        let p = project_pi(&x).to_array();
        let target = f.eval(l);
        let res = p.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        let norm = x.op_norm();
        cert.projection_residual = cert.projection_residual.max(res);
        cert.max_norm = cert.max_norm.max(norm);
        if inside {
            cert.max_interior_norm = cert.max_interior_norm.max(norm);
        }
    }
    cert
}

fn require_three(f: &DiscMap) -> Result<()> {
    if f.dim() != 3 {
        return Err(Error::Parameter(format!("expected a disc in C^3, got {} coordinates", f.dim())));
    }
    Ok(())
}

/// Lifts a disc that misses the triangular set: `G = (f1, w; w, f2)` with `w`
/// a holomorphic root of `f1 f2 - f3`.
pub fn lift_avoiding_t(f: &DiscMap, branch: Branch, tol: &Tolerances) -> Result<LiftResult> {
    require_three(f)?;
    let defect = f.triangular_defect()?;
    let root = analytic_sqrt(&defect, branch, tol).map_err(|e| match e {
        Error::Precondition(m) => Error::Precondition(format!(
            "f1 f2 - f3 is not zero-free on the closed disc ({m}); use lift_through_t_origin"
        )),
        other => other,
    })?;
    let c = f.components();
    let disc = MatrixDisc { g1: c[0].clone(), g2: c[1].clone(), root, n: 0, m: 0 };
    let certificate = certify(f, &disc);
    Ok(LiftResult { disc, certificate })
}

/// Lifts `f = (l^n g1, l^m g2, l^{n+m} g3)` when `g` misses the triangular set,
/// as `(l^n g1, l^n w; l^m w, l^m g2)` with `w^2 = g1 g2 - g3`.
pub fn lift_through_t_origin(f: &DiscMap, n: u32, m: u32, branch: Branch, tol: &Tolerances) -> Result<LiftResult> {
    require_three(f)?;
    let c = f.components();
    let orders = [n, m, n + m];
    let mut g = Vec::with_capacity(3);
    for (j, (fj, &k)) in c.iter().zip(&orders).enumerate() {
        if fj.den.eval(ZERO).norm() < tol.singular {
            return Err(Error::Singularity(format!("coordinate {j} has a pole at the origin")));
        }
        let scale = fj.num.max_abs_coeff().max(1.0);
        let low = fj.num.low_order(1e-13 * scale);
        if !fj.num.is_zero(1e-13 * scale) && low < k as usize {
            return Err(Error::Precondition(format!(
                "coordinate {j} vanishes to order {low} at 0, below the requested {k}"
            )));
        }
        g.push(fj.shift_down(k as usize));
    }
    let g = DiscMap::new(g, tol)?;
    let d0 = g.triangular_defect()?.eval(ZERO);
    if d0.norm() <= tol.boundary {
        return Err(Error::MultiStep(format!(
            "the factored disc still meets the triangular set at 0 (|g1 g2 - g3| = {:e})",
            d0.norm()
        )));
    }
    let root = analytic_sqrt(&g.triangular_defect()?, branch, tol)?;
    let gc = g.components();
    let disc = MatrixDisc { g1: gc[0].clone(), g2: gc[1].clone(), root, n, m };
    let certificate = certify(f, &disc);
    Ok(LiftResult { disc, certificate })
}

/// Orders `(n, m)` for [`lift_through_t_origin`] from the vanishing orders of
/// the coordinates at 0; identically zero coordinates impose no constraint.
pub fn detect_orders(f: &DiscMap, tol: &Tolerances) -> Result<(u32, u32)> {
    require_three(f)?;
    let c = f.components();
    let ord = |r: &Rational| -> Result<Option<u32>> {
        if r.is_zero(1e-14) {
            Ok(None)
        } else {
            vanishing_order(r, ZERO, tol).map(Some)
        }
    };
    let (o1, o2, o3) = (ord(&c[0])?, ord(&c[1])?, ord(&c[2])?);
    let cap3 = o3.unwrap_or(u32::MAX);
    let n = o1.unwrap_or(cap3).min(cap3);
    let m = o2.unwrap_or(cap3 - n).min(cap3 - n);
    if n == u32::MAX || m == u32::MAX {
        return Err(Error::Degenerate("the disc is identically zero".into()));
    }
    Ok((n, m))
}

/// `(v11, w; w, v22)` with `w` the principal root of `v12 v21`; same projection, no larger norm.
pub fn symmetrize_boundary(v: &Mat2) -> Mat2 {
    Mat2::symmetric(v.e11, (v.e12 * v.e21).sqrt(), v.e22)
}
