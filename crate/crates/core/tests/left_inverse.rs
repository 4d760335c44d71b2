use rayon::prelude::*;
use tetra_core::domains::{in_tetrablock, phi_lambda};
use tetra_core::geodesic::{GeodesicSpec, NonTriangularSpec, TriangularSpec};
use tetra_core::kernel::{poincare, winding_number};
use tetra_core::left_inverse::{
    composite_h, left_inverse_for, left_inverse_nontriangular, left_inverse_triangular, mobius_rational,
    rouche_fixed_point, select_tau_gamma, verify_left_inverse, LeftInverseSpec,
};
use tetra_core::sampling::{
    random_disc_point, random_feasible_nontriangular, random_tetrablock_point, random_triangular_geodesic,
    random_unit, task_rng,
};
use tetra_core::transforms::psi_z;
use tetra_core::{c64, Complex64, Mat2, Point3, Tolerances};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn rouche_trivial_cases() {
    let tol = tol();
    let kappa = c64(0.3, -0.45);
    let r = rouche_fixed_point(|_| Ok(kappa), &[1, 1, 2], &[ZERO; 3], &tol).unwrap();
    assert!((r.lambda_star - kappa).norm() < 1e-12);
    assert_eq!(r.winding_certificate, 1);
    // F(lambda z) = lambda z, so lambda - lambda z vanishes only at 0
    let z = [c64(0.6, 0.2)];
    let r = rouche_fixed_point(|w| Ok(w[0]), &[1], &z, &tol).unwrap();
    assert!(r.lambda_star.norm() < 1e-12);
    assert!(r.residual <= tol.fix);
}

/// Root of `lambda - F(phi_lambda(z))` by a 200x200 grid minimum and five Newton steps.
fn grid_oracle<G: Fn(Complex64) -> Complex64>(g: G) -> Complex64 {
    let n = 200;
    let mut best = (f64::INFINITY, ZERO);
    for i in 0..n {
        for j in 0..n {
            let l = c64(-1.0 + (2 * i + 1) as f64 / n as f64, -1.0 + (2 * j + 1) as f64 / n as f64);
            if l.norm() < 0.999 {
                let v = g(l).norm();
                if v < best.0 {
                    best = (v, l);
                }
            }
        }
    }
    let mut l = best.1;
    for _ in 0..5 {
        let h = 1e-6;
        l -= g(l) / ((g(l + h) - g(l - h)) / (2.0 * h));
    }
    l
}

#[test]
fn rouche_matches_grid_search() {
    let tol = tol();
    (0..60u64).into_par_iter().for_each(|i| {
        let mut rng = task_rng(50, i);
        let z = random_tetrablock_point(&mut rng, 0.05);
        let zeta = random_disc_point(&mut rng, 1.0);
        let omega = random_unit(&mut rng);
        // a map of the tetrablock into the disc built from Psi
        let f = |w: &[Complex64]| psi_z(zeta, &Point3::new(w[0], w[1], w[2]), &tol).map(|v| omega * v * v);
        let r = rouche_fixed_point(f, &[1, 1, 2], &z.to_array(), &tol).unwrap();
        assert_eq!(r.winding_certificate, 1);
        let g = |l: Complex64| l - omega * psi_z(zeta, &phi_lambda(&z, l), &tol).unwrap().powu(2);
        let oracle = grid_oracle(g);
        assert!((r.lambda_star - oracle).norm() < 1e-10, "task {i}: {} vs {oracle}", r.lambda_star);
        for factor in [2.0, 1.5, 1.0, 0.75, 0.5] {
            let w = winding_number(g, ZERO, 1.0 - factor * tol.rouche_eps, tol.contour).unwrap();
            assert_eq!(w, 1, "task {i} factor {factor}");
        }
    });
}

#[test]
fn triangular_inverses() {
    let tol = tol();
    let simplest = TriangularSpec { u: Mat2::identity(), v: Mat2::identity(), c: ZERO, mu: ONE, z_is_identity: true };
    let l = left_inverse_triangular(&simplest, &tol).unwrap();
    let res = verify_left_inverse(|x| simplest.eval(x, &tol), |p| l.eval(p, &tol), 64);
    assert!(res <= 1e-10);

    (0..500u64).into_par_iter().for_each(|i| {
        let s = random_triangular_geodesic(&mut task_rng(51, i));
        let l = left_inverse_triangular(&s, &tol).unwrap();
        let res = verify_left_inverse(|x| s.eval(x, &tol), |p| l.eval(p, &tol), 64);
        assert!(res <= 1e-10, "spec {i}: {res:e}");
        // negative control: rotate a by 0.1 rad. Near diagonal UV every a is
        // close to a left inverse, so the control needs |(UV)_12| bounded below.
        if (s.u * s.v).e12.norm() < 0.2 {
            return;
        }
        if let LeftInverseSpec::PsiFamily { a, phase } = l {
            let wrong = LeftInverseSpec::PsiFamily { a: a * Complex64::from_polar(1.0, 0.1), phase };
            let res = verify_left_inverse(|x| s.eval(x, &tol), |p| wrong.eval(p, &tol), 64);
            assert!(res > 1e-3, "spec {i}: perturbed residual {res:e}");
        } else {
            panic!("expected a Psi inverse");
        }
    });
}

#[test]
fn trivial_inverse_is_exact() {
    let tol = tol();
    for theta in [0.0, 0.7, -2.1] {
        let spec = GeodesicSpec::Trivial { theta };
        let l = left_inverse_for(&spec, &tol).unwrap();
        assert_eq!(l, LeftInverseSpec::Direct { coordinate: 2, phase: Complex64::from_polar(1.0, -theta) });
        let res = verify_left_inverse(|x| spec.eval(x, &tol), |p| l.eval(p, &tol), 64);
        assert!(res < 1e-15);
    }
}

fn finite_difference_at_zero(f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let d = |h: f64| (f(c64(h, 0.0)) - f(c64(-h, 0.0))) / (2.0 * h);
    let h = 1e-3;
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

#[test]
fn tau_gamma_selection() {
    let tol = tol();
    (0..500u64).into_par_iter().for_each(|i| {
        let s = random_feasible_nontriangular(&mut task_rng(52, i));
        let (tau, gamma) = select_tau_gamma(&s).unwrap();
        assert!((tau.norm() - 1.0).abs() < 1e-14 && gamma.norm() < 1.0);
        assert!((s.d - s.b * tau * s.beta * gamma).norm() < 1e-14);
        let h = composite_h(&s, tau, gamma, &tol).unwrap();
        let h0 = h.eval(ZERO);
        assert!((h0 + tau * gamma * s.beta * s.beta).norm() < 1e-14);
        let h1 = finite_difference_at_zero(|l| h.eval(l));
        assert!((h1.norm() - (1.0 - h0.norm_sqr())).abs() < 1e-9, "spec {i}");
    });
}

#[test]
fn tau_gamma_when_d_vanishes() {
    let tol = tol();
    let beta: f64 = 0.5;
    let s = NonTriangularSpec { a: ZERO, b: ONE, c: -Complex64::from_polar(1.0, 0.4), d: ZERO, mu: c64(0.2, 0.1), beta };
    assert!(s.c.norm_sqr() > 1.0 / (1.0 + beta * beta));
    let (tau, gamma) = select_tau_gamma(&s).unwrap();
    assert_eq!(gamma, ZERO);
    assert!((tau.norm() - 1.0).abs() < 1e-15);
    let h = composite_h(&s, tau, gamma, &tol).unwrap();
    assert!(h.eval(ZERO).norm() < 1e-15);
}

#[test]
fn composite_inverses() {
    let tol = tol();
    (0..200u64).into_par_iter().for_each(|i| {
        let mut rng = task_rng(53, i);
        let s = random_feasible_nontriangular(&mut rng);
        let c = left_inverse_nontriangular(&s, &tol).unwrap();
        assert!(c.schwarz_pick_defect <= 1e-9);
        let LeftInverseSpec::Composite { tau, gamma, .. } = c.spec else { panic!("expected a composite") };
        assert!((c.h0 + tau * gamma * s.beta * s.beta).norm() < 1e-14);
        let res = verify_left_inverse(|x| s.eval(x, &tol), |p| c.spec.eval(p, &tol), 64);
        assert!(res <= 1e-8, "spec {i}: {res:e}");

        let m = mobius_rational(tau, gamma);
        for _ in 0..20 {
            let l = random_disc_point(&mut rng, 0.99);
            let f = s.eval(l, &tol).unwrap();
            let g = Point3::new(m.eval(l) * f.z1, f.z2, m.eval(l) * f.z3);
            assert!(in_tetrablock(&g).inside);
        }
        // the left inverse preserves the Poincare distance along the disc
        for _ in 0..5 {
            let (l1, l2) = (random_disc_point(&mut rng, 0.9), random_disc_point(&mut rng, 0.9));
            let a = c.spec.eval(&s.eval(l1, &tol).unwrap(), &tol).unwrap();
            let b = c.spec.eval(&s.eval(l2, &tol).unwrap(), &tol).unwrap();
            assert!((poincare(a, b).unwrap() - poincare(l1, l2).unwrap()).abs() < 1e-9);
        }
    });
}

#[test]
fn schwarz_pick_for_library_maps() {
    let tol = tol();
    let mut rng = task_rng(54, 0);
    for i in 0..200 {
        let s = random_triangular_geodesic(&mut rng);
        let zeta = random_disc_point(&mut rng, 1.0);
        let h = |l: Complex64| psi_z(zeta, &s.eval(l, &tol).unwrap(), &tol).unwrap();
        for _ in 0..10 {
            let (l1, l2) = (random_disc_point(&mut rng, 0.95), random_disc_point(&mut rng, 0.95));
            assert!(poincare(h(l1), h(l2)).unwrap() <= poincare(l1, l2).unwrap() + 1e-10, "task {i}");
        }
    }
}
