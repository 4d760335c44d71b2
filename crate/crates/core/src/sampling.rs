//! Seeded samplers: low-discrepancy disc points, random unitaries, random
//! points of the tetrablock and random parameter records.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domains::{in_tetrablock, Point3};
use crate::geodesic::{GeodesicSpec, NonTriangularSpec, TriangularSpec};
use crate::kernel::{DiscMap, Mat2, Poly, Rational};
use crate::transforms::TetraAutParams;

/// Radius of the disc sampled by [`halton_disc`] unless stated otherwise.
pub const SAMPLE_RADIUS: f64 = 0.95;

/// The RNG owned by task `index` of a run seeded with `master`.
pub fn task_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Radical inverse of `i` in the given base.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `n` points of the disc of radius `r_max`, area-uniform, from the (2, 3) Halton sequence.
pub fn halton_disc(n: usize, r_max: f64) -> Vec<Complex64> {
    (1..=n as u64)
        .map(|i| Complex64::from_polar(r_max * halton(i, 2).sqrt(), TAU * halton(i, 3)))
        .collect()
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform point of the disc of radius `r_max`.
pub fn random_disc_point<R: Rng + ?Sized>(rng: &mut R, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, TAU * rng.random::<f64>())
}

/// Random unitary from Gram–Schmidt on two complex Gaussian rows.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    loop {
        let r1 = [gaussian_complex(rng), gaussian_complex(rng)];
        let r2 = [gaussian_complex(rng), gaussian_complex(rng)];
        let n1 = (r1[0].norm_sqr() + r1[1].norm_sqr()).sqrt();
        if n1 < 1e-8 {
            continue;
        }
        let u1 = [r1[0] / n1, r1[1] / n1];
        let proj = r2[0] * u1[0].conj() + r2[1] * u1[1].conj();
        let v = [r2[0] - proj * u1[0], r2[1] - proj * u1[1]];
        let n2 = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        if n2 < 1e-8 {
            continue;
        }
        return Mat2::new(u1[0], u1[1], v[0] / n2, v[1] / n2);
    }
}

/// Point of the tetrablock with margin above `min_margin`, by rejection from
/// the box `|Re z_j|, |Im z_j| <= 1`.
pub fn random_tetrablock_point<R: Rng + ?Sized>(rng: &mut R, min_margin: f64) -> Point3 {
    loop {
        let z = random_box_point(rng, 1.0);
        if in_tetrablock(&z).margin > min_margin {
            return z;
        }
    }
}

/// Uniform point of the real box `[-h, h]^6`.
pub fn random_box_point<R: Rng + ?Sized>(rng: &mut R, h: f64) -> Point3 {
    let mut c = || Complex64::new(rng.random_range(-h..=h), rng.random_range(-h..=h));
    Point3::new(c(), c(), c())
}

pub fn random_aut_params<R: Rng + ?Sized>(rng: &mut R, r_max: f64) -> TetraAutParams {
    TetraAutParams {
        a1: random_disc_point(rng, r_max),
        a2: random_disc_point(rng, r_max),
        theta: TAU * rng.random::<f64>(),
        eta: TAU * rng.random::<f64>(),
        swap: rng.random::<bool>(),
    }
}

/// A `Z = id` triangular geodesic: `U`, `V` random and `|c| = |(UV)_12|`.
pub fn random_triangular_geodesic<R: Rng + ?Sized>(rng: &mut R) -> TriangularSpec {
    loop {
        let u = random_unitary(rng);
        let v = random_unitary(rng);
        let k12 = (u * v).e12.norm();
        if k12 * k12 > 0.98 {
            continue;
        }
        return TriangularSpec {
            u,
            v,
            c: Complex64::from_polar(k12, TAU * rng.random::<f64>()),
            mu: Complex64::new(1.0, 0.0),
            z_is_identity: true,
        };
    }
}

/// Any triangular-family record; `Z(lambda) = mu lambda` with `|mu| < 1`
/// when `z_is_identity` is false.
pub fn random_triangular<R: Rng + ?Sized>(rng: &mut R, z_is_identity: bool) -> TriangularSpec {
    let u = random_unitary(rng);
    let v = random_unitary(rng);
    TriangularSpec {
        u,
        v,
        c: random_disc_point(rng, 0.9),
        mu: if z_is_identity {
            Complex64::new(1.0, 0.0)
        } else {
            random_disc_point(rng, 0.95)
        },
        z_is_identity,
    }
}

/// Rows `(a, b)`, `(c, d)` of a unitary with `|c| = modulus`.
fn unitary_rows<R: Rng + ?Sized>(rng: &mut R, modulus: f64) -> [Complex64; 4] {
    let a = Complex64::from_polar((1.0 - modulus * modulus).sqrt(), TAU * rng.random::<f64>());
    let b = Complex64::from_polar(modulus, TAU * rng.random::<f64>());
    let w = random_unit(rng);
    [a, b, -w * b.conj(), w * a.conj()]
}

/// Non-triangular record with every parameter random.
pub fn random_nontriangular<R: Rng + ?Sized>(rng: &mut R) -> NonTriangularSpec {
    let modulus = rng.random::<f64>().sqrt();
    let [a, b, c, d] = unitary_rows(rng, modulus);
    NonTriangularSpec {
        a,
        b,
        c,
        d,
        mu: random_disc_point(rng, 0.95),
        beta: rng.random_range(0.05..0.95),
    }
}

/// Non-triangular record with `|c|^2 > 1/(1 + beta^2)` and
/// `|c| |d| (1 + beta^2) < beta`, both with a margin.
pub fn random_feasible_nontriangular<R: Rng + ?Sized>(rng: &mut R) -> NonTriangularSpec {
    let beta: f64 = rng.random_range(0.1..0.9);
    let lo = 1.0 / (1.0 + beta * beta);
    let c2 = rng.random_range(lo + 0.02 * (1.0 - lo)..1.0 - 0.02 * (1.0 - lo));
    let [a, b, c, d] = unitary_rows(rng, c2.sqrt());
    NonTriangularSpec {
        a,
        b,
        c,
        d,
        mu: random_disc_point(rng, 0.9),
        beta,
    }
}

/// A spec from one of the families that admit a constructed left inverse,
/// chosen by `index % 3`.
pub fn random_certifiable_spec<R: Rng + ?Sized>(rng: &mut R, index: usize) -> GeodesicSpec {
    match index % 3 {
        0 => GeodesicSpec::Trivial { theta: TAU * rng.random::<f64>() },
        1 => GeodesicSpec::Triangular(random_triangular_geodesic(rng)),
        _ => GeodesicSpec::NonTriangular(random_feasible_nontriangular(rng)),
    }
}

/// A polynomial disc `f = pi(s G)` in the tetrablock whose defect
/// `f1 f2 - f3` has prescribed zeros.
///
/// `G = (g1, w1; w2, g2)` with `w1 w2 = prod (l - sigma_k)^{m_k}`, so the
/// defect is `s^2 w1 w2`; `s` makes `|s G| <= 0.9` on the unit circle. Zeros lie
/// in `|l| <= 0.8`, pairwise at least 0.05 apart, with multiplicities 1 to 3.
pub fn random_planted_disc<R: Rng + ?Sized>(rng: &mut R) -> (DiscMap, Vec<(Complex64, u32)>) {
    let count = rng.random_range(1..=3);
    let mut zeros: Vec<(Complex64, u32)> = Vec::new();
    while zeros.len() < count {
        let sigma = random_disc_point(rng, 0.8);
        if zeros.iter().all(|(t, _)| (t - sigma).norm() >= 0.05) {
            zeros.push((sigma, rng.random_range(1..=3)));
        }
    }
    let mut w1 = Poly::one();
    let mut w2 = Poly::one();
    for &(sigma, mult) in &zeros {
        for _ in 0..mult {
            let factor = Poly::from_roots(&[sigma], Complex64::new(1.0, 0.0));
            if rng.random::<bool>() {
                w1 = &w1 * &factor;
            } else {
                w2 = &w2 * &factor;
            }
        }
    }
    let mut random_poly = |deg: usize| Poly::new((0..=deg).map(|_| gaussian_complex(rng) * 0.5).collect());
    let g1 = random_poly(2);
    let g2 = random_poly(2);
    let circle_max = (0..512)
        .map(|k| {
            let l = Complex64::from_polar(1.0, TAU * k as f64 / 512.0);
            Mat2::new(g1.eval(l), w1.eval(l), w2.eval(l), g2.eval(l)).op_norm()
        })
        .fold(0.0, f64::max);
    let s = Complex64::new(0.9 / circle_max, 0.0);
    let f1 = g1.scale(s);
    let f2 = g2.scale(s);
    let f3 = (&(&g1 * &g2) - &(&w1 * &w2)).scale(s * s);
    let f = DiscMap::new(
        vec![Rational::from_poly(f1), Rational::from_poly(f2), Rational::from_poly(f3)],
        &Default::default(),
    )
    .expect("polynomial discs have no poles");
    (f, zeros)
}
