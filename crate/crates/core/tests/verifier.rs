use rayon::prelude::*;
use tetra_core::domains::{in_tetrablock, phi_lambda, rho};
use tetra_core::geodesic::GeodesicSpec;
use tetra_core::kernel::poincare;
use tetra_core::left_inverse::left_inverse_for;
use tetra_core::sampling::{
    random_aut_params, random_box_point, random_disc_point, random_feasible_nontriangular, random_triangular_geodesic,
    task_rng,
};
use tetra_core::transforms::aut_tetrablock;
use tetra_core::verifier::{
    caratheodory_lower, check_equality_on_geodesic, confirm_witness, find_nonconvexity_witness, lempert_upper,
    polydisc_margin, psh_spot_check, psh_suite, psi_family_lower, witness_search,
};
use tetra_core::{c64, Complex64, Point3, Result, Tolerances};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn upper_bound_examples() {
    let tol = tol();
    let spec = GeodesicSpec::Trivial { theta: 0.2 };
    let l = c64(0.3, 0.3);
    assert_eq!(lempert_upper(&spec, l, l, &tol).unwrap(), 0.0);
    let u = lempert_upper(&spec, ZERO, c64(0.5, 0.0), &tol).unwrap();
    assert!((u - 0.5_f64.atanh()).abs() < 1e-15);
}

#[test]
fn trivial_pair_has_zero_gap() {
    let r = check_equality_on_geodesic(0, &GeodesicSpec::Trivial { theta: 0.0 }, ZERO, c64(0.5, 0.0), &tol()).unwrap();
    assert!(r.pass && r.gap.abs() < 1e-15);
    let w = Point3::new(c64(0.1, 0.0), ZERO, c64(0.2, 0.1));
    assert_eq!(caratheodory_lower(&w, &w, &[], &tol()), 0.0);
}

fn check_specs(specs: Vec<GeodesicSpec>, seed: u64) {
    let tol = tol();
    specs.into_par_iter().enumerate().for_each(|(i, spec)| {
        let mut rng = task_rng(seed, i as u64);
        let (l1, l2) = (random_disc_point(&mut rng, 0.9), random_disc_point(&mut rng, 0.9));
        let r = check_equality_on_geodesic(i as u64, &spec, l1, l2, &tol).unwrap();
        assert!(r.lower <= r.upper + 1e-10, "spec {i}: c > k");
        assert!(r.pass && !r.inconclusive && r.gap <= 1e-7, "spec {i}: gap {:e}", r.gap);

        let l = left_inverse_for(&spec, &tol).unwrap();
        let (w, z) = (spec.eval(l1, &tol).unwrap(), spec.eval(l2, &tol).unwrap());
        let map = |x: &Point3| l.eval(x, &tol);
        let with_inverse = caratheodory_lower(&w, &z, &[&map], &tol);
        assert!((with_inverse - poincare(l1, l2).unwrap()).abs() <= 1e-8);
        assert!(psi_family_lower(&w, &z, &tol) <= with_inverse + 1e-12);
    });
}

#[test]
fn equality_on_triangular_geodesics() {
    let specs = (0..500).map(|i| GeodesicSpec::Triangular(random_triangular_geodesic(&mut task_rng(70, i)))).collect();
    check_specs(specs, 71);
}

#[test]
fn equality_on_nontriangular_geodesics() {
    let specs = (0..200).map(|i| GeodesicSpec::NonTriangular(random_feasible_nontriangular(&mut task_rng(72, i)))).collect();
    check_specs(specs, 73);
}

#[test]
fn gaps_are_invariant_under_automorphisms() {
    let tol = tol();
    (0..60u64).into_par_iter().for_each(|i| {
        let mut rng = task_rng(74, i);
        let spec = if i % 2 == 0 {
            GeodesicSpec::Triangular(random_triangular_geodesic(&mut rng))
        } else {
            GeodesicSpec::NonTriangular(random_feasible_nontriangular(&mut rng))
        };
        let (l1, l2) = (random_disc_point(&mut rng, 0.9), random_disc_point(&mut rng, 0.9));
        let before = check_equality_on_geodesic(i, &spec, l1, l2, &tol).unwrap();

        let p = random_aut_params(&mut rng, 0.7);
        let q = p.inverse();
        let l = left_inverse_for(&spec, &tol).unwrap();
        // transported pair and left inverse L o psi^-1
        let w = aut_tetrablock(&p, &spec.eval(l1, &tol).unwrap(), &tol).unwrap();
        let z = aut_tetrablock(&p, &spec.eval(l2, &tol).unwrap(), &tol).unwrap();
        let moved = |x: &Point3| -> Result<Complex64> { l.eval(&aut_tetrablock(&q, x, &tol)?, &tol) };
        let after = lempert_upper(&spec, l1, l2, &tol).unwrap() - caratheodory_lower(&w, &z, &[&moved], &tol);
        assert!((after - before.gap).abs() <= 1e-8, "task {i}: {:e} vs {after:e}", before.gap);
    });
}

#[test]
fn psi_family_alone_suffices_from_origin() {
    let tol = tol();
    (0..100u64).into_par_iter().for_each(|i| {
        let mut rng = task_rng(75, i);
        let s = random_triangular_geodesic(&mut rng);
        let l = random_disc_point(&mut rng, 0.9);
        let (w, z) = (s.eval(ZERO, &tol).unwrap(), s.eval(l, &tol).unwrap());
        assert_eq!(w, Point3::zero());
        let gap = poincare(ZERO, l).unwrap() - psi_family_lower(&w, &z, &tol);
        assert!(gap.abs() <= 1e-6, "spec {i}: {gap:e}");
    });
}

#[test]
fn plurisubharmonicity_checks() {
    let mut rng = task_rng(76, 0);
    for _ in 0..100 {
        let z0 = random_box_point(&mut rng, 1.0);
        assert!(psh_spot_check(&z0, &Point3::zero(), 0.3, 512));
    }
    let reports = psh_suite(100, 77);
    assert_eq!(reports.len(), 100);
    assert!(reports.iter().all(|r| r.pass));
    for _ in 0..200 {
        let z = random_box_point(&mut rng, 1.0);
        let values: Vec<f64> = (0..=50).map(|k| rho(&phi_lambda(&z, c64(k as f64 / 50.0, 0.0)))).collect();
        assert!(values.windows(2).all(|w| w[1] >= w[0] - 1e-15));
    }
}

#[test]
fn nonconvexity_witness() {
    let r = find_nonconvexity_witness(7, 1_000_000);
    assert!(r.found && confirm_witness(&r));
    let (w, z) = (r.w.unwrap(), r.z.unwrap());
    assert!(in_tetrablock(&w).margin > 1e-6 && in_tetrablock(&z).margin > 1e-6);
    assert!(!in_tetrablock(&((w + z) * 0.5)).inside);
    assert_eq!(find_nonconvexity_witness(7, 1_000_000), r);

    let control = witness_search(polydisc_margin, 7, 100_000);
    assert!(!control.found);
    assert_eq!(control.samples, 100_000);
}

