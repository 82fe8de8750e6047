use orbhull::fixtures::{su2_adjoint, su2_adjoint_point, u2_sphere};
use orbhull::haar_numeric::{CompactMatrixGroup, GroupKind};
use orbhull::measure_mult::*;
use orbhull::torus_orbit::TorusAction;
use orbhull::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn sphere_mean_value_property() {
    let (g, v) = u2_sphere();
    let cfg = EstimationConfig::new(50_000, 21);
    let rep = multiplicativity_defect(&g, &v, 2, &cfg).unwrap();
    // holomorphic averages over the sphere are p(0)
    for m in &rep.averages {
        assert!(m.estimate.value.norm() <= 4.0 * m.estimate.std_error + 1e-12, "{m:?}");
    }
    let fp = fixed_point_consistency(&g, &v, 2, &cfg).unwrap();
    assert!(fp.residual <= 1e-2);
}

#[test]
fn seed_invariance_of_defect() {
    let (g, v) = u2_sphere();
    let a = multiplicativity_defect(&g, &v, 2, &EstimationConfig::new(20_000, 1)).unwrap();
    let b = multiplicativity_defect(&g, &v, 2, &EstimationConfig::new(20_000, 2)).unwrap();
    let se = (a.defect_std_error.powi(2) + b.defect_std_error.powi(2)).sqrt();
    assert!((a.defect - b.defect).abs() <= 6.0 * se, "{} {} {se}", a.defect, b.defect);

    let g = su2_adjoint();
    let v = su2_adjoint_point();
    let a = multiplicativity_defect(&g, &v, 1, &EstimationConfig::new(20_000, 1)).unwrap();
    let b = multiplicativity_defect(&g, &v, 1, &EstimationConfig::new(20_000, 2)).unwrap();
    let se = (a.defect_std_error.powi(2) + b.defect_std_error.powi(2)).sqrt();
    assert!((a.defect - b.defect).abs() <= 6.0 * se, "{} {} {se}", a.defect, b.defect);
}

#[test]
fn defect_is_monotone_in_degree() {
    let (g, v) = u2_sphere();
    let cfg = EstimationConfig::new(5_000, 4);
    let mut prev = 0.0;
    for d in 1..=3 {
        let rep = multiplicativity_defect(&g, &v, d, &cfg).unwrap();
        assert!(prev <= rep.defect + 1e-12);
        prev = rep.defect;
    }
    let g = su2_adjoint();
    let v = su2_adjoint_point();
    let d1 = multiplicativity_defect(&g, &v, 1, &cfg).unwrap().defect;
    let d2 = multiplicativity_defect(&g, &v, 2, &cfg).unwrap().defect;
    assert!(d1 <= d2 + 1e-12);
}

#[test]
fn invariants_are_constant_on_orbits() {
    let g = su2_adjoint();
    let e = orbit_average(&g, &su2_adjoint_point(), &Polynomial::trace_of_square(2), &EstimationConfig::new(2_000, 6)).unwrap();
    assert!(e.sample_variance <= 1e-20);
    assert!((e.value - c(-2.0, 0.0)).norm() < 1e-12);

    let t = CompactMatrixGroup::torus(TorusAction::from_rows(&[&[1, 2], &[-1, -2]]).unwrap());
    let cfg = EstimationConfig {
        force_monte_carlo: true,
        ..EstimationConfig::new(2_000, 6)
    };
    let e = orbit_average(&t, &[c(2.0, 1.0), c(0.5, 0.0)], &Polynomial::monomial(vec![1, 1]), &cfg).unwrap();
    assert!(e.sample_variance <= 1e-20);
}

#[test]
fn torus_closed_form_agrees_with_sampling() {
    let t = CompactMatrixGroup::torus(TorusAction::from_rows(&[&[1, 0], &[-1, 0], &[0, 1]]).unwrap());
    let v = [c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)];
    let exact = multiplicativity_defect(&t, &v, 2, &EstimationConfig::new(0, 0)).unwrap();
    let cfg = EstimationConfig {
        force_monte_carlo: true,
        ..EstimationConfig::new(40_000, 13)
    };
    let mc = multiplicativity_defect(&t, &v, 2, &cfg).unwrap();
    assert!(exact.exact && !mc.exact);
    for (a, b) in exact.averages.iter().zip(&mc.averages) {
        assert_eq!(a.exponent, b.exponent);
        assert!((a.estimate.value - b.estimate.value).norm() <= 5.0 * b.estimate.std_error + 1e-12);
    }
    assert_eq!(exact.verdict, DefectVerdict::NotMultiplicative);
    assert_eq!(mc.verdict, DefectVerdict::NotMultiplicative);
}

#[test]
fn adjoint_counterexample_quadratic_average() {
    // μ(z₁₁²): z₁₁ = ⟨g v g*, E₁₁⟩; with v = ih + e and tr v² = -2 the
    // average of z₁₁² is tr(v²)/6 by invariance of the quadratic form.
    let g = su2_adjoint();
    let v = su2_adjoint_point();
    let cfg = EstimationConfig::new(60_000, 31);
    let e = orbit_average(&g, &v, &Polynomial::monomial(vec![2, 0, 0, 0]), &cfg).unwrap();
    assert!((e.value - c(-1.0 / 3.0, 0.0)).norm() <= 4.0 * e.std_error, "{e:?}");
}

#[test]
fn monomial_cap_is_configurable() {
    let g = CompactMatrixGroup::defining(GroupKind::Unitary(3)).unwrap();
    let v = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
    let mut cfg = EstimationConfig::new(200, 0);
    cfg.monomial_cap = 10;
    assert!(nilcone_test_numeric(&g, &v, 3, 1e-3, &[], &cfg).is_err());
    cfg.monomial_cap = 100;
    assert!(nilcone_test_numeric(&g, &v, 3, 1e-3, &[], &cfg).is_ok());
}
