//! Left inverses of the extremal discs and the Rouché fixed-point solver.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::{scale_balanced, Point3};
use crate::error::{Error, Result};
use crate::geodesic::{avoids_t, GeodesicSpec, NonTriangularSpec, TriangularSpec};
use crate::kernel::{trace_winding, ContourTrace, Mobius, Poly, Rational};
use crate::sampling::{halton_disc, SAMPLE_RADIUS};
use crate::transforms::psi_z;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

const NEWTON_MAX_ITERATIONS: usize = 50;
const NEWTON_STEP: f64 = 1e-6;
const GRID: usize = 64;
const PHASE_GRID: usize = 4096;
const PROBES: usize = 8;

/// Unique solution of `lambda = F(lambda^{m_1} z_1, ..., lambda^{m_n} z_n)` in the disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoucheResult {
    pub lambda_star: Complex64,
    pub residual: f64,
    /// Winding number of `lambda - F(...)` on the circle `|lambda| = 1 - rouche_eps`.
    pub winding_certificate: i64,
}

fn unit_phase(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        ONE
    } else {
        z / z.norm()
    }
}

fn newton<G: Fn(Complex64) -> Complex64>(g: &G, start: Complex64, radius: f64, tol: f64) -> (Complex64, f64) {
    let mut u = start;
    let mut res = g(u).norm();
    if !res.is_finite() {
        return (u, f64::INFINITY);
    }
    for _ in 0..NEWTON_MAX_ITERATIONS {
        let gu = g(u);
        let h = Complex64::new(NEWTON_STEP, 0.0);
        let dg = (g(u + h) - g(u - h)) / (2.0 * NEWTON_STEP);
        if !(dg.norm() > 0.0) || !dg.is_finite() {
            break;
        }
        let mut step = gu / dg;
        let mut improved = false;
        for _ in 0..12 {
            let mut next = u - step;
            if next.norm() >= radius {
                next *= 0.999 * radius / next.norm();
            }
            let r = g(next).norm();
            if r < res {
                u = next;
                res = r;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved || (res <= tol && step.norm() < 1e-15) {
            break;
        }
    }
    (u, res)
}

fn certified_trace<G: Fn(Complex64) -> Complex64>(g: &G, tol: &Tolerances) -> Result<ContourTrace> {
    let eps = tol.rouche_eps;
    let mut last = None;
    for factor in [1.0, 1.5, 0.75, 2.0, 0.5] {
        match trace_winding(g, ZERO, 1.0 - factor * eps, tol.contour) {
            Ok(t) => return Ok(t),
            Err(e @ Error::Contour { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// Solves `lambda = F(scale_balanced(z, lambda, m))` for `lambda` in the disc.
///
/// The winding number of `g(lambda) = lambda - F(...)` on `|lambda| = 1 - rouche_eps`
/// must be 1. The root is started at the first moment of the contour samples
/// (which equals the root when the winding is 1) and polished by Newton with a
/// central-difference derivative. If that fails, the start is the minimum of
/// a 64x64 polar grid, and finally a winding-guided subdivision.
pub fn rouche_fixed_point<F>(f: F, weights: &[u32], z: &[Complex64], tol: &Tolerances) -> Result<RoucheResult>
where
    F: Fn(&[Complex64]) -> Result<Complex64>,
{
    scale_balanced(z, ONE, weights)?;
    let g = |l: Complex64| -> Complex64 {
        match scale_balanced(z, l, weights).and_then(|y| f(&y)) {
            Ok(v) => l - v,
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let trace = certified_trace(&g, tol)?;
    if trace.winding != 1 {
        return Err(Error::Contradiction(format!(
            "winding number {} on |lambda| = {}; the map does not send the closed disc into the disc",
            trace.winding, trace.radius
        )));
    }
    let radius = trace.radius;
    let done = |(u, res): (Complex64, f64)| {
        (res <= tol.fix).then_some(RoucheResult {
            lambda_star: u,
            residual: res,
            winding_certificate: trace.winding,
        })
    };
    let mut guess = trace.first_moment();
    if !guess.is_finite() || guess.norm() >= radius {
        guess = ZERO;
    }
    if let Some(r) = done(newton(&g, guess, radius, tol.fix)) {
        return Ok(r);
    }
    let mut best = (ZERO, f64::INFINITY);
    for i in 0..GRID {
        for j in 0..GRID {
            let u = Complex64::from_polar(radius * (i as f64 + 0.5) / GRID as f64, TAU * j as f64 / GRID as f64);
            let r = g(u).norm();
            if r < best.1 {
                best = (u, r);
            }
        }
    }
    if let Some(r) = done(newton(&g, best.0, radius, tol.fix)) {
        return Ok(r);
    }
    // Seven half-radius discs cover a disc; keep one that still winds once.
    let (mut center, mut r) = (ZERO, radius);
    while r > 1e-6 {
        let half = 0.5 * r;
        let mut children = vec![center];
        children.extend((0..6).map(|k| {
            center + Complex64::from_polar(0.75f64.sqrt() * r, TAU * (k as f64 + 0.5) / 6.0)
        }));
        let next = children.into_iter().find(|&c| {
            matches!(trace_winding(g, c, half, tol.contour), Ok(t) if t.winding == 1)
        });
        match next {
            Some(c) => {
                center = c;
                r = half;
            }
            None => break,
        }
    }
    done(newton(&g, center, radius, tol.fix)).ok_or_else(|| {
        Error::Construction(format!(
            "fixed-point iteration stalled above tol_fix = {:e}",
            tol.fix
        ))
    })
}

fn default_phase() -> Complex64 {
    ONE
}

/// A holomorphic map of the tetrablock into the disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LeftInverseSpec {
    /// `x -> phase * Psi_a(x)`.
    PsiFamily {
        a: Complex64,
        #[serde(default = "default_phase")]
        phase: Complex64,
    },
    /// `x -> m^{-1}(u)` where `u` solves `u = m(h^{-1}(F(u x1, x2, u x3)))`,
    /// `F(z) = (z3 - z2)/(z1 - 1)` and `m(l) = tau (l - gamma)/(1 - conj(gamma) l)`.
    Composite {
        tau: Complex64,
        gamma: Complex64,
        weights: [u32; 3],
        /// The disc automorphism `F ∘ g`.
        h: Mobius,
    },
    /// `x -> phase * x_coordinate`.
    Direct { coordinate: usize, phase: Complex64 },
}

/// `F(z) = (z3 - z2)/(z1 - 1)`.
pub fn composite_base(z: &[Complex64]) -> Result<Complex64> {
    let den = z[0] - ONE;
    if den.norm() == 0.0 {
        return Err(Error::Singularity("z1 = 1".into()));
    }
    Ok((z[2] - z[1]) / den)
}

impl LeftInverseSpec {
    pub fn validate(&self) -> Result<()> {
        let unimodular = |z: Complex64, name: &str| {
            if (z.norm() - 1.0).abs() > 1e-12 {
                Err(Error::Parameter(format!("{name} must be unimodular, |{name}| = {}", z.norm())))
            } else {
                Ok(())
            }
        };
        match *self {
            LeftInverseSpec::PsiFamily { a, phase } => {
                unimodular(a, "a")?;
                unimodular(phase, "phase")
            }
            LeftInverseSpec::Composite { tau, gamma, h, .. } => {
                unimodular(tau, "tau")?;
                if !(gamma.norm() < 1.0) {
                    return Err(Error::Parameter(format!("|gamma| = {} is not below 1", gamma.norm())));
                }
                Mobius::new(h.zero, h.rotation).map(|_| ())
            }
            LeftInverseSpec::Direct { coordinate, phase } => {
                if coordinate > 2 {
                    return Err(Error::Parameter(format!("coordinate {coordinate} is not 0, 1 or 2")));
                }
                unimodular(phase, "phase")
            }
        }
    }

    pub fn eval(&self, x: &Point3, tol: &Tolerances) -> Result<Complex64> {
        match *self {
            LeftInverseSpec::PsiFamily { a, phase } => Ok(phase * psi_z(a, x, tol)?),
            LeftInverseSpec::Direct { coordinate, phase } => Ok(phase * x.to_array()[coordinate]),
            LeftInverseSpec::Composite { tau, gamma, weights, h } => {
                let m = Mobius::new(gamma, tau)?;
                let outer = m.compose(&h.inverse());
                let r = rouche_fixed_point(
                    |y| composite_base(y).map(|v| outer.eval(v)),
                    &weights,
                    &x.to_array(),
                    tol,
                )?;
                Ok(m.inverse().eval(r.lambda_star))
            }
        }
    }
}

/// Largest `|L(f(lambda)) - lambda|` over `n_samples` Halton points of the disc
/// of radius [`SAMPLE_RADIUS`]; evaluation failures count as an infinite residual.
pub fn verify_left_inverse<F, L>(f: F, l: L, n_samples: usize) -> f64
where
    F: Fn(Complex64) -> Result<Point3>,
    L: Fn(&Point3) -> Result<Complex64>,
{
    halton_disc(n_samples, SAMPLE_RADIUS)
        .into_iter()
        .map(|lam| match f(lam).and_then(|p| l(&p)) {
            Ok(v) if v.is_finite() => (v - lam).norm(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Best rotation `phase` for `phase * Psi_a ∘ f = id` on the probe points, with its max residual.
fn fit_psi(a: Complex64, probes: &[(Complex64, Point3)], tol: &Tolerances) -> (Complex64, f64) {
    let vals: Option<Vec<Complex64>> = probes.iter().map(|(_, p)| psi_z(a, p, tol).ok()).collect();
    let Some(vals) = vals else {
        return (ONE, f64::INFINITY);
    };
    let fit: Complex64 = vals.iter().zip(probes).map(|(v, (l, _))| v.conj() * l).sum();
    let phase = unit_phase(fit);
    let res = vals
        .iter()
        .zip(probes)
        .map(|(v, (l, _))| (phase * v - l).norm())
        .fold(0.0, f64::max);
    (phase, res)
}

/// Left inverse `phase * Psi_a` of a `Z = id` triangular disc.
///
/// The candidate `a = -(k11/|k11|) conj(c k12)/|c k12|` with `K = UV` is tried
/// first; it is exact when `|c| = |k12|`. Otherwise `a` is scanned over 4096
/// points of the circle and the best phase refined by golden-section search.
pub fn left_inverse_triangular(s: &TriangularSpec, tol: &Tolerances) -> Result<LeftInverseSpec> {
    s.validate(tol)?;
    if !s.z_is_identity {
        return Err(Error::Precondition("the Psi_a inverse needs Z(lambda) = lambda".into()));
    }
    let probes: Vec<(Complex64, Point3)> = halton_disc(PROBES, 0.9)
        .into_iter()
        .map(|l| s.eval(l, tol).map(|p| (l, p)))
        .collect::<Result<_>>()?;
    let k = s.slope_matrix();
    let ck = s.c * k.e12;
    let guess = -unit_phase(k.e11) * if ck.norm() > 1e-14 { ck.conj() / ck.norm() } else { ONE };
    let (phase, res) = fit_psi(guess, &probes, tol);
    if res <= 1e-12 {
        return Ok(LeftInverseSpec::PsiFamily { a: guess, phase });
    }
    let objective = |t: f64| fit_psi(Complex64::from_polar(1.0, t), &probes, tol).1;
    let step = TAU / PHASE_GRID as f64;
    let (mut lo_t, mut best) = (0.0, f64::INFINITY);
    for j in 0..PHASE_GRID {
        let t = j as f64 * step;
        let r = objective(t);
        if r < best {
            best = r;
            lo_t = t;
        }
    }
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x0, mut x1) = (lo_t - step, lo_t + step);
    for _ in 0..80 {
        let p = x1 - golden * (x1 - x0);
        let q = x0 + golden * (x1 - x0);
        if objective(p) < objective(q) {
            x1 = q;
        } else {
            x0 = p;
        }
    }
    let t = 0.5 * (x0 + x1);
    let a = Complex64::from_polar(1.0, t);
    let (phase, res) = fit_psi(a, &probes, tol);
    let (a, phase, res) = if res <= best { (a, phase, res) } else {
        let a = Complex64::from_polar(1.0, lo_t);
        let (ph, r) = fit_psi(a, &probes, tol);
        (a, ph, r)
    };
    if res >= 1e-6 {
        return Err(Error::Construction(format!(
            "no a on the circle brings Psi_a ∘ f within 1e-6 of a rotation (best {res:e})"
        )));
    }
    Ok(LeftInverseSpec::PsiFamily { a, phase })
}

/// `(tau, gamma)` with `d = b tau beta gamma`, `tau` aligned with `(c - beta (d/(b beta)) a)^2`.
pub fn select_tau_gamma(s: &NonTriangularSpec) -> Result<(Complex64, Complex64)> {
    s.validate(1e-10)?;
    let beta = s.beta;
    let threshold = 1.0 / (1.0 + beta * beta);
    if !(s.c.norm_sqr() > threshold + 1e-12) {
        return Err(Error::Feasibility(format!(
            "|c|^2 = {} does not exceed 1/(1 + beta^2) = {threshold}",
            s.c.norm_sqr()
        )));
    }
    let kappa = s.d / (s.b * beta);
    let tau = unit_phase((s.c - beta * kappa * s.a).powu(2));
    let gamma = kappa * tau.conj();
    if !(gamma.norm() < 1.0) {
        return Err(Error::Feasibility(format!("|gamma| = {} is not below 1", gamma.norm())));
    }
    Ok((tau, gamma))
}

/// A composite left inverse together with its Schwarz–Pick certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositeInverse {
    pub spec: LeftInverseSpec,
    pub h0: Complex64,
    pub h1: Complex64,
    /// `| |h'(0)| - (1 - |h(0)|^2) |`.
    pub schwarz_pick_defect: f64,
}

/// `m(l) = tau (l - gamma)/(1 - conj(gamma) l)` as a rational function.
pub fn mobius_rational(tau: Complex64, gamma: Complex64) -> Rational {
    Rational::new(Poly::new(vec![-tau * gamma, tau]), Poly::new(vec![ONE, -gamma.conj()]))
}

/// The disc `g = (m f1, f2, m f3)` and `h = F ∘ g` for a non-triangular spec.
pub fn composite_h(s: &NonTriangularSpec, tau: Complex64, gamma: Complex64, tol: &Tolerances) -> Result<Rational> {
    let f = s.disc(tol)?;
    let m = mobius_rational(tau, gamma);
    let c = f.components();
    let g1 = &m * &c[0];
    let g3 = &m * &c[2];
    Ok(&(&g3 - &c[1]) / &(&g1 - &Rational::constant(ONE)))
}

/// Left inverse of a non-triangular disc that misses the triangular set.
pub fn left_inverse_nontriangular(s: &NonTriangularSpec, tol: &Tolerances) -> Result<CompositeInverse> {
    if !avoids_t(s)?.avoids {
        return Err(Error::Precondition("the disc meets the triangular set".into()));
    }
    let (tau, gamma) = select_tau_gamma(s)?;
    let h = composite_h(s, tau, gamma, tol)?;
    let (h0, h1) = h.eval_with_derivative(ZERO);
    let defect = (h1.norm() - (1.0 - h0.norm_sqr())).abs();
    if !(defect <= 1e-9) {
        return Err(Error::Certification(format!(
            "|h'(0)| = {} but 1 - |h(0)|^2 = {}",
            h1.norm(),
            1.0 - h0.norm_sqr()
        )));
    }
    let spec = LeftInverseSpec::Composite {
        tau,
        gamma,
        weights: [1, 0, 1],
        h: Mobius::from_origin_jet(h0, h1)?,
    };
    Ok(CompositeInverse { spec, h0, h1, schwarz_pick_defect: defect })
}

/// Whether a scalar rational map is `omega * lambda` with `|omega| = 1`.
fn rotation_of(f: &Rational) -> Option<Complex64> {
    let pts = [ZERO, Complex64::new(0.5, 0.0), Complex64::new(0.0, -0.7), Complex64::new(-0.3, 0.4)];
    if f.eval(pts[0]).norm() > 1e-13 {
        return None;
    }
    let omega = f.eval(pts[1]) / pts[1];
    let consistent = pts[2..].iter().all(|&l| (f.eval(l) - omega * l).norm() <= 1e-12);
    (consistent && (omega.norm() - 1.0).abs() <= 1e-12).then_some(omega)
}

/// A left inverse for any spec family that admits one.
pub fn left_inverse_for(spec: &GeodesicSpec, tol: &Tolerances) -> Result<LeftInverseSpec> {
    match spec {
        GeodesicSpec::Trivial { theta } => Ok(LeftInverseSpec::Direct {
            coordinate: 2,
            phase: Complex64::from_polar(1.0, -theta),
        }),
        GeodesicSpec::InsideT { f1, f2 } => {
            for (coordinate, f) in [(0usize, f1), (1, f2)] {
                if let Some(omega) = f.components().first().and_then(rotation_of) {
                    return Ok(LeftInverseSpec::Direct { coordinate, phase: omega.conj() });
                }
            }
            Err(Error::Construction(
                "inside_t disc with neither coordinate a rotation".into(),
            ))
        }
        GeodesicSpec::Triangular(s) if s.z_is_identity => left_inverse_triangular(s, tol),
        GeodesicSpec::Triangular(_) => Err(Error::Construction(
            "no left inverse construction for Z(lambda) = mu lambda with |mu| < 1".into(),
        )),
        GeodesicSpec::NonTriangular(s) => left_inverse_nontriangular(s, tol).map(|c| c.spec),
    }
}
