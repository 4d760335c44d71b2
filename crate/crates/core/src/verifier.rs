//! Certification of `c = k~` on geodesic-generated pairs, invariance checks,
//! plurisubharmonicity spot checks and the non-convexity witness search.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::domains::{in_tetrablock, in_tetrablock_alt, rho, Point3};
use crate::error::Result;
use crate::geodesic::{nu_of_disc, GeodesicSpec, Nu};
use crate::kernel::{poincare, DiscMap};
use crate::left_inverse::left_inverse_for;
use crate::sampling::{
    random_aut_params, random_box_point, random_certifiable_spec, random_disc_point, random_planted_disc,
    task_rng,
};
use crate::transforms::{aut_tetrablock, psi_z};

/// Polar grid for the `Psi_z` family: radii `i/(N-1)`, angles `2 pi j / N`.
const PSI_GRID: usize = 64;
/// Slack in `c <= k~` before a report is marked as a violation.
pub const ORDER_SLACK: f64 = 1e-10;
/// Quadrature slack of the sub-mean-value test.
pub const PSH_SLACK: f64 = 1e-3;
/// Minimum margin of witness endpoints.
pub const WITNESS_MARGIN: f64 = 1e-6;
/// Midpoints must be at least this far outside.
pub const WITNESS_OUTSIDE: f64 = 1e-9;

/// A scalar map of the tetrablock into the disc.
pub type ScalarMap<'a> = dyn Fn(&Point3) -> Result<Complex64> + Sync + 'a;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub spec_id: u64,
    pub kind: String,
    pub lambda1: Complex64,
    pub lambda2: Complex64,
    pub upper: f64,
    pub lower: f64,
    pub gap: f64,
    pub pass: bool,
    /// No left inverse could be constructed; `pass` is false but the theorem is not contradicted.
    pub inconclusive: bool,
}

/// Upper bound for the Lempert function from the disc itself: `p(lambda1, lambda2)`.
pub fn lempert_upper(spec: &GeodesicSpec, lambda1: Complex64, lambda2: Complex64, tol: &Tolerances) -> Result<f64> {
    spec.validate(tol)?;
    poincare(lambda1, lambda2)
}

fn pair_distance(l: &ScalarMap<'_>, w: &Point3, z: &Point3) -> Option<f64> {
    let (a, b) = (l(w).ok()?, l(z).ok()?);
    poincare(a, b).ok()
}

/// Lower bound for the Carathéodory distance from `Psi_zeta` and `Psi_zeta`
/// composed with the coordinate swap, with `zeta` on a 64x64 polar grid of
/// the closed disc, the best node refined by pattern search.
pub fn psi_family_lower(w: &Point3, z: &Point3, tol: &Tolerances) -> f64 {
    let value = |r: f64, t: f64, swap: bool| -> f64 {
        let zeta = Complex64::from_polar(r.clamp(0.0, 1.0), t);
        let (w, z) = if swap { (w.swapped(), z.swapped()) } else { (*w, *z) };
        match (psi_z(zeta, &w, tol), psi_z(zeta, &z, tol)) {
            (Ok(a), Ok(b)) => poincare(a, b).unwrap_or(0.0),
            _ => 0.0,
        }
    };
    let mut best = (0.0, 0.0, false, 0.0);
    for swap in [false, true] {
        for i in 0..PSI_GRID {
            let r = i as f64 / (PSI_GRID - 1) as f64;
            for j in 0..PSI_GRID {
                let t = TAU * j as f64 / PSI_GRID as f64;
                let v = value(r, t, swap);
                if v > best.3 {
                    best = (r, t, swap, v);
                }
            }
        }
    }
    let (mut r, mut t, swap, mut v) = best;
    let (mut dr, mut dt) = (1.0 / (PSI_GRID - 1) as f64, TAU / PSI_GRID as f64);
    while dr > 1e-12 || dt > 1e-12 {
        let mut moved = false;
        for (pr, pt) in [(r + dr, t), (r - dr, t), (r, t + dt), (r, t - dt)] {
            let pr = pr.clamp(0.0, 1.0);
            let pv = value(pr, pt, swap);
            if pv > v {
                (r, t, v) = (pr, pt, pv);
                moved = true;
            }
        }
        if !moved {
            dr *= 0.5;
            dt *= 0.5;
        }
    }
    v
}

/// Best `p(L(w), L(z))` over the `Psi` family and the given candidates.
pub fn caratheodory_lower(w: &Point3, z: &Point3, candidates: &[&ScalarMap<'_>], tol: &Tolerances) -> f64 {
    if w == z {
        return 0.0;
    }
    candidates
        .iter()
        .filter_map(|l| pair_distance(l, w, z))
        .fold(psi_family_lower(w, z, tol), f64::max)
}

/// Compares `p(lambda1, lambda2)` with the Carathéodory lower bound at
/// `f(lambda1)`, `f(lambda2)`, using the constructed left inverse of `spec`.
pub fn check_equality_on_geodesic(
    spec_id: u64,
    spec: &GeodesicSpec,
    lambda1: Complex64,
    lambda2: Complex64,
    tol: &Tolerances,
) -> Result<EqualityReport> {
    let upper = lempert_upper(spec, lambda1, lambda2, tol)?;
    let w = spec.eval(lambda1, tol)?;
    let z = spec.eval(lambda2, tol)?;
    let inverse = left_inverse_for(spec, tol);
    let lower = match &inverse {
        Ok(l) => {
            let map = |x: &Point3| l.eval(x, tol);
            caratheodory_lower(&w, &z, &[&map], tol)
        }
        Err(_) => caratheodory_lower(&w, &z, &[], tol),
    };
    let gap = upper - lower;
    let inconclusive = inverse.is_err();
    Ok(EqualityReport {
        spec_id,
        kind: spec.kind().to_string(),
        lambda1,
        lambda2,
        upper,
        lower,
        gap,
        pass: !inconclusive && gap <= tol.eq && lower <= upper + ORDER_SLACK,
        inconclusive,
    })
}

/// Sub-mean-value test of `rho` on the disc `z0 + r e^{i t} v`.
pub fn psh_spot_check(z0: &Point3, v: &Point3, r: f64, n_nodes: usize) -> bool {
    let mean = circle_mean_rho(z0, v, r, n_nodes);
    rho(z0) <= mean + PSH_SLACK
}

fn circle_mean_rho(z0: &Point3, v: &Point3, r: f64, n_nodes: usize) -> f64 {
    let n = n_nodes.max(1);
    (0..n)
        .map(|k| rho(&(*z0 + *v * Complex64::from_polar(r, TAU * k as f64 / n as f64))))
        .sum::<f64>()
        / n as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub found: bool,
    pub w: Option<Point3>,
    pub z: Option<Point3>,
    /// Margin of `(w + z)/2`; negative means outside.
    pub midpoint_margin: Option<f64>,
    pub seed: u64,
    /// Points drawn, counted against the budget.
    pub samples: u64,
}

/// Searches for `w`, `z` with margins above `WITNESS_MARGIN` whose midpoint has
/// margin below `-WITNESS_OUTSIDE`, drawing points uniformly from the box
/// `[-1, 1]^6` until `budget` points have been drawn.
pub fn witness_search<M: Fn(&Point3) -> f64>(margin: M, seed: u64, budget: u64) -> WitnessReport {
    let mut rng = task_rng(seed, 0);
    let mut samples = 0u64;
    let draw = |rng: &mut rand_chacha::ChaCha8Rng, samples: &mut u64| -> Option<Point3> {
        while *samples < budget {
            *samples += 1;
            let p = random_box_point(rng, 1.0);
            if margin(&p) > WITNESS_MARGIN {
                return Some(p);
            }
        }
        None
    };
    while let Some(w) = draw(&mut rng, &mut samples) {
        let Some(z) = draw(&mut rng, &mut samples) else { break };
        let mid = (w + z) * 0.5;
        let m = margin(&mid);
        if m < -WITNESS_OUTSIDE {
            return WitnessReport { found: true, w: Some(w), z: Some(z), midpoint_margin: Some(m), seed, samples };
        }
    }
    WitnessReport { found: false, w: None, z: None, midpoint_margin: None, seed, samples }
}

/// [`witness_search`] for the tetrablock.
pub fn find_nonconvexity_witness(seed: u64, budget: u64) -> WitnessReport {
    witness_search(|p| in_tetrablock(p).margin, seed, budget.max(1))
}

/// Re-checks a witness with both defining functions.
pub fn confirm_witness(report: &WitnessReport) -> bool {
    match (report.w, report.z) {
        (Some(w), Some(z)) => {
            let mid = (w + z) * 0.5;
            [in_tetrablock, in_tetrablock_alt].iter().all(|m| {
                m(&w).margin > WITNESS_MARGIN && m(&z).margin > WITNESS_MARGIN && m(&mid).margin < 0.0
            })
        }
        _ => false,
    }
}

/// `1 - max |z_j|`, the margin of the unit polydisc.
pub fn polydisc_margin(z: &Point3) -> f64 {
    1.0 - z.to_array().iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// One [`EqualityReport`] per task; task `i` draws a certifiable spec and a
/// pair in the disc of radius 0.9 from its own stream.
pub fn equality_suite(n: usize, seed: u64, tol: &Tolerances) -> Vec<Result<EqualityReport>> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let spec = random_certifiable_spec(&mut rng, i);
            let l1 = random_disc_point(&mut rng, 0.9);
            let l2 = random_disc_point(&mut rng, 0.9);
            check_equality_on_geodesic(i as u64, &spec, l1, l2, tol)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub id: u64,
    /// Planted `(zero, order)` pairs and the orders found before and after the automorphism.
    pub planted: Vec<(Complex64, u32)>,
    pub orders_before: Vec<u32>,
    pub orders_after: Vec<u32>,
    pub gap_before: f64,
    pub gap_after: f64,
    pub pass: bool,
}

fn orders_at(f: &DiscMap, zeros: &[(Complex64, u32)], tol: &Tolerances) -> Vec<u32> {
    zeros
        .iter()
        .map(|&(s, _)| match nu_of_disc(f, s, tol) {
            Ok(Nu::Order(k)) => k,
            _ => u32::MAX,
        })
        .collect()
}

/// Automorphism invariance of `nu` on planted-zero discs and of the gap on
/// geodesic pairs transported by the same automorphism.
pub fn invariance_suite(n: usize, seed: u64, tol: &Tolerances) -> Vec<Result<InvarianceReport>> {
    (0..n)
        .into_par_iter()
        .map(|i| -> Result<InvarianceReport> {
            let mut rng = task_rng(seed, i as u64);
            let psi = random_aut_params(&mut rng, 0.7);
            let (f, planted) = random_planted_disc(&mut rng);
            let image = psi.compose_disc(&f, tol)?;
            let orders_before = orders_at(&f, &planted, tol);
            let orders_after = orders_at(&image, &planted, tol);
            let planted_ok = orders_before
                .iter()
                .zip(&planted)
                .all(|(&o, &(_, m))| o == m);

            let spec = random_certifiable_spec(&mut rng, i);
            let l1 = random_disc_point(&mut rng, 0.9);
            let l2 = random_disc_point(&mut rng, 0.9);
            let before = check_equality_on_geodesic(i as u64, &spec, l1, l2, tol)?;
            let inverse = left_inverse_for(&spec, tol)?;
            let back = psi.inverse();
            let moved = |x: &Point3| -> Result<Complex64> { inverse.eval(&aut_tetrablock(&back, x, tol)?, tol) };
            let w = aut_tetrablock(&psi, &spec.eval(l1, tol)?, tol)?;
            let z = aut_tetrablock(&psi, &spec.eval(l2, tol)?, tol)?;
            let gap_after = before.upper - caratheodory_lower(&w, &z, &[&moved], tol);
            let pass = planted_ok
                && orders_before == orders_after
                && before.pass
                && gap_after <= tol.eq
                && (gap_after - before.gap).abs() <= 1e-8;
            Ok(InvarianceReport {
                id: i as u64,
                planted,
                orders_before,
                orders_after,
                gap_before: before.gap,
                gap_after,
                pass,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PshReport {
    pub id: u64,
    pub z0: Point3,
    pub v: Point3,
    pub r: f64,
    pub rho_center: f64,
    pub rho_mean: f64,
    pub pass: bool,
}

/// Sub-mean-value checks of `rho` on random discs in the box `[-1, 1]^6`,
/// with unit-length directions, radii in `(0, 0.5)` and 512 nodes.
pub fn psh_suite(n: usize, seed: u64) -> Vec<PshReport> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = task_rng(seed, i as u64);
            let z0 = random_box_point(&mut rng, 1.0);
            let raw = random_box_point(&mut rng, 1.0);
            let len = raw.to_array().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let v = raw * (1.0 / len.max(1e-300));
            let r = rng.random_range(1e-3..0.5);
            let rho_center = rho(&z0);
            let rho_mean = circle_mean_rho(&z0, &v, r, 512);
            PshReport {
                id: i as u64,
                z0,
                v,
                r,
                rho_center,
                rho_mean,
                pass: rho_center <= rho_mean + PSH_SLACK,
            }
        })
        .collect()
}
