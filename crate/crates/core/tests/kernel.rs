use nalgebra::{DMatrix, Matrix2};
use proptest::prelude::*;
use rand::Rng;
use tetra_core::kernel::{
    analytic_sqrt, count_roots_in_disc, mobius, poincare, vanishing_order, Branch, Mat2, Poly, Rational,
};
use tetra_core::sampling::{gaussian_complex, random_disc_point, random_unitary, task_rng};
use tetra_core::{c64, Complex64, Error, Tolerances};

fn cplx() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c64(a, b))
}

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.999f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn mat() -> impl Strategy<Value = Mat2> {
    (cplx(), cplx(), cplx(), cplx()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn svd_norm(m: &Mat2) -> f64 {
    let n = Matrix2::new(m.e11, m.e12, m.e21, m.e22);
    n.singular_values().max()
}

#[test]
fn op_norm_examples() {
    assert!((Mat2::identity().op_norm() - 1.0).abs() < 1e-15);
    assert!((Mat2::diag(c64(0.5, 0.0), c64(-0.3, 0.0)).op_norm() - 0.5).abs() < 1e-15);
}

#[test]
fn op_norm_matches_characteristic_polynomial() {
    let mut rng = task_rng(1, 0);
    for _ in 0..1000 {
        let m = Mat2::new(gaussian_complex(&mut rng), gaussian_complex(&mut rng), gaussian_complex(&mut rng), gaussian_complex(&mut rng));
        let h = m * m.adjoint();
        // largest root of x^2 - tr x + det for the Hermitian M M*
        let (tr, det) = (h.trace().re, h.det().re);
        let top = (tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0;
        assert!((m.op_norm() - top.sqrt()).abs() <= 1e-12 * top.sqrt().max(1.0));
        assert!((m.op_norm() - svd_norm(&m)).abs() <= 1e-12 * top.sqrt().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn op_norm_unitarily_invariant(m in mat(), seed in any::<u64>()) {
        let mut rng = task_rng(seed, 0);
        let (u, v) = (random_unitary(&mut rng), random_unitary(&mut rng));
        prop_assert!(((u * m * v).op_norm() - m.op_norm()).abs() <= 1e-12 * m.op_norm().max(1.0));
    }

    #[test]
    fn op_norm_submultiplicative_and_bounds_det(a in mat(), b in mat()) {
        prop_assert!((a * b).op_norm() <= a.op_norm() * b.op_norm() * (1.0 + 1e-12) + 1e-15);
        prop_assert!(a.op_norm().powi(2) >= a.det().norm() * (1.0 - 1e-12) - 1e-15);
        prop_assert!(a.op_norm() >= 0.0);
    }

    #[test]
    fn op_norm_agrees_with_svd(m in mat()) {
        prop_assert!((m.op_norm() - svd_norm(&m)).abs() <= 1e-12 * m.op_norm().max(1.0));
    }

    #[test]
    fn poincare_triangle_inequality(a in disc_point(), b in disc_point(), c in disc_point()) {
        let (ab, bc, ac) = (poincare(a, b).unwrap(), poincare(b, c).unwrap(), poincare(a, c).unwrap());
        prop_assert!(ac <= ab + bc + 1e-12 * (1.0 + ab + bc));
    }

    #[test]
    fn poincare_symmetric(a in disc_point(), b in disc_point()) {
        let (x, y) = (poincare(a, b).unwrap(), poincare(b, a).unwrap());
        prop_assert!((x - y).abs() <= 1e-12 * x.max(1.0));
    }

    #[test]
    fn sqrt_squares_back(roots in prop::collection::vec((1.3..4.0f64, 0.0..std::f64::consts::TAU), 0..4), lead in cplx()) {
        prop_assume!(lead.norm() > 0.1);
        let roots: Vec<_> = roots.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect();
        let f = Rational::from_poly(Poly::from_roots(&roots, lead));
        let g = analytic_sqrt(&f, Branch::Plus, &Tolerances::default()).unwrap();
        for k in 0..64 {
            for r in [0.0, 0.5, 0.9, 1.0] {
                let l = Complex64::from_polar(r, k as f64 * std::f64::consts::TAU / 64.0);
                let gl = g.eval(l);
                prop_assert!((gl * gl - f.eval(l)).norm() <= 1e-10 * f.eval(l).norm().max(1.0));
            }
        }
    }
}

#[test]
fn poincare_examples() {
    assert_eq!(poincare(c64(0.0, 0.0), c64(0.0, 0.0)).unwrap(), 0.0);
    let l = c64(0.3, -0.6);
    assert!(poincare(l, l).unwrap().abs() < 1e-15);
    assert!((poincare(c64(0.0, 0.0), c64(0.5, 0.0)).unwrap() - 0.5_f64.atanh()).abs() < 1e-15);
    assert!((poincare(c64(0.0, 0.0), c64(0.5, 0.0)).unwrap() - 0.549_306_1).abs() < 1e-7);
    assert!(matches!(poincare(c64(1.0, 0.0), c64(0.0, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn mobius_examples() {
    let one = c64(1.0, 0.0);
    let l = c64(0.2, 0.7);
    assert_eq!(mobius(c64(0.0, 0.0), one, l).unwrap(), l);
    let g = c64(-0.4, 0.3);
    assert!(mobius(g, one, g).unwrap().norm() < 1e-16);
    let tau = Complex64::from_polar(1.0, 0.9);
    for k in 0..256 {
        let z = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 256.0);
        assert!((mobius(g, tau, z).unwrap().norm() - 1.0).abs() < 1e-14);
    }
    assert!(mobius(c64(1.0, 0.0), one, l).is_err());
}

#[test]
fn sqrt_examples() {
    let tol = Tolerances::default();
    let g = analytic_sqrt(&Rational::constant(c64(1.0, 0.0)), Branch::Plus, &tol).unwrap();
    for l in [c64(0.0, 0.0), c64(0.5, 0.5), c64(-1.0, 0.0)] {
        assert!((g.eval(l) - 1.0).norm() < 1e-14);
    }

    let f = Rational::from_poly(Poly::new(vec![c64(1.0, 0.0), c64(1.0, 0.0), c64(0.25, 0.0)]));
    let g = analytic_sqrt(&f, Branch::Plus, &tol).unwrap();
    let mut rng = task_rng(2, 0);
    for _ in 0..128 {
        let l = random_disc_point(&mut rng, 1.0);
        assert!((g.eval(l) * g.eval(l) - f.eval(l)).norm() <= 1e-10);
        assert!((g.eval(l) - (1.0 + l / 2.0)).norm() <= 1e-10);
    }

    let c = c64(-3.0, 4.0);
    for branch in [Branch::Plus, Branch::Minus] {
        let g = analytic_sqrt(&Rational::constant(c), branch, &tol).unwrap();
        let expect = c.sqrt() * branch.sign();
        assert!((g.eval(c64(0.3, -0.8)) - expect).norm() < 1e-13);
    }

    let inside = Rational::from_poly(Poly::from_roots(&[c64(0.5, 0.0)], c64(1.0, 0.0)));
    assert!(matches!(analytic_sqrt(&inside, Branch::Plus, &tol), Err(Error::Precondition(_))));
}

#[test]
fn vanishing_order_examples() {
    let tol = Tolerances::default();
    let sq = Rational::from_poly(Poly::monomial(c64(1.0, 0.0), 2));
    assert_eq!(vanishing_order(&sq, c64(0.0, 0.0), &tol).unwrap(), 2);
    let s = c64(0.3, 0.2);
    let lin = Rational::from_poly(Poly::from_roots(&[s], c64(1.0, 0.0)));
    assert_eq!(vanishing_order(&lin, s, &tol).unwrap(), 1);
    assert_eq!(vanishing_order(&lin, c64(-0.3, 0.0), &tol).unwrap(), 0);
    let zero = Rational::from_poly(Poly::zero());
    assert!(matches!(vanishing_order(&zero, s, &tol), Err(Error::Degenerate(_))));
}

fn planted<R: Rng>(rng: &mut R) -> (Poly, Vec<(Complex64, u32)>) {
    let k = rng.random_range(1..=4);
    let mut centers: Vec<Complex64> = Vec::new();
    while centers.len() < k {
        let c = random_disc_point(rng, 1.6);
        if (c.norm() - 1.0).abs() > 0.05 && centers.iter().all(|d| (c - *d).norm() > 0.1) {
            centers.push(c);
        }
    }
    let planted: Vec<_> = centers.into_iter().map(|c| (c, rng.random_range(1..=3u32))).collect();
    let roots: Vec<_> = planted.iter().flat_map(|(c, m)| std::iter::repeat_n(*c, *m as usize)).collect();
    (Poly::from_roots(&roots, gaussian_complex(rng)), planted)
}

#[test]
fn count_matches_planted_orders() {
    let tol = Tolerances::default();
    for i in 0..500 {
        let mut rng = task_rng(3, i);
        let (p, planted) = planted(&mut rng);
        let f = Rational::from_poly(p.clone());
        let count = count_roots_in_disc(|l| p.eval(l), 1.0, tol.contour).unwrap();
        let inside: u32 = planted
            .iter()
            .filter(|(c, _)| c.norm() < 1.0)
            .map(|(c, _)| vanishing_order(&f, *c, &tol).unwrap())
            .sum();
        let expected: u32 = planted.iter().filter(|(c, _)| c.norm() < 1.0).map(|(_, m)| *m).sum();
        assert_eq!(count, inside, "task {i}");
        assert_eq!(count, expected, "task {i}");
    }
}

#[test]
fn count_examples() {
    let tol = Tolerances::default().contour;
    assert_eq!(count_roots_in_disc(|l| l, 1.0, tol).unwrap(), 1);
    assert_eq!(count_roots_in_disc(|l| l * l - 4.0, 1.0, tol).unwrap(), 0);
    assert!(matches!(count_roots_in_disc(|l| l - 1.0, 1.0, tol), Err(Error::Contour { .. })));
}

#[test]
fn count_matches_companion_eigenvalues() {
    let tol = Tolerances::default().contour;
    let mut done = 0;
    let mut i = 0;
    while done < 200 {
        i += 1;
        let mut rng = task_rng(4, i);
        let c: Vec<Complex64> = (0..6).map(|_| gaussian_complex(&mut rng)).collect();
        let p = Poly::new(c.clone());
        // companion matrix of the monic normalization
        let mut comp = DMatrix::<Complex64>::zeros(5, 5);
        for k in 0..5 {
            comp[(0, k)] = -c[4 - k] / c[5];
            if k > 0 {
                comp[(k, k - 1)] = c64(1.0, 0.0);
            }
        }
        let eig = comp.schur().eigenvalues().expect("complex schur form is triangular");
        if eig.iter().any(|z| (z.norm() - 1.0).abs() < 1e-3) {
            continue;
        }
        let oracle = eig.iter().filter(|z| z.norm() < 1.0).count() as u32;
        assert_eq!(count_roots_in_disc(|l| p.eval(l), 1.0, tol).unwrap(), oracle, "task {i}");
        done += 1;
    }
}
