use num_traits::{Signed, Zero};
use orbhull::fixtures::torus_fixtures;
use orbhull::lattice_cone::{integer_kernel, Rational, WeightVector};
use orbhull::torus_orbit::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance() -> impl Strategy<Value = (TorusAction, OrbitPoint)> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, n), m),
            prop::collection::vec(-2i64..=2, m),
        )
            .prop_filter("nonzero point", |(_, v)| v.iter().any(|&x| x != 0))
            .prop_map(move |(rows, v)| {
                let action = TorusAction::new(n, rows.into_iter().map(WeightVector::new).collect()).unwrap();
                (action, OrbitPoint::exact_integers(&v))
            })
    })
}

/// Another point of the relative interior of the dual cone: a large
/// multiple of `ξ*` shifted inside the annihilator of the lineality space.
fn other_relint_point(report: &FibrationReport, n: usize, seed: u64) -> Vec<Rational> {
    let lin = report.lineality.vectors();
    let annihilator: Vec<WeightVector> = if lin.is_empty() {
        (0..n).map(|k| WeightVector::new((0..n).map(|i| i64::from(i == k)).collect())).collect()
    } else {
        let columns: Vec<WeightVector> = (0..n).map(|k| WeightVector::new(lin.iter().map(|l| l.0[k]).collect())).collect();
        integer_kernel(&columns).unwrap().vectors().to_vec()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eta = vec![0i64; n];
    for b in &annihilator {
        let c: i64 = rng.random_range(-2..=2);
        for (e, x) in eta.iter_mut().zip(&b.0) {
            *e += c * x;
        }
    }
    let eta_r: Vec<Rational> = eta.iter().map(|&x| Rational::from_integer(x.into())).collect();
    let shift = report
        .spectrum_generators
        .generators()
        .iter()
        .map(|g| g.pair(&eta_r).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let scale = shift + Rational::from_integer(1.into());
    report.xi_star.iter().zip(&eta_r).map(|(x, e)| x * &scale + e).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn report_invariants((action, v) in instance()) {
        let rep = analyze(&action, &v).unwrap();
        prop_assert_eq!(rep.antisymmetric, rep.lineality.rank() == 0);
        if rep.nilpotent {
            prop_assert!(rep.antisymmetric);
        }
        prop_assert_eq!(rep.nilpotent, rep.v_tilde.is_zero());
        prop_assert_eq!(rep.nilpotent, rep.base_coords.is_empty());
        let (OrbitPoint::Exact(vt), OrbitPoint::Exact(vv)) = (&rep.v_tilde, &v) else { unreachable!() };
        for &j in &rep.base_coords {
            prop_assert_eq!(&vt[j], &vv[j]);
        }
        for &j in &rep.fiber_coords {
            prop_assert!(vt[j].is_zero());
        }
        // idempotence
        let again = reachable_limit(&action, &rep.v_tilde, &rep.xi_star).unwrap();
        prop_assert_eq!(again.limit(), Some(&rep.v_tilde));
    }

    #[test]
    fn v_tilde_does_not_depend_on_the_relint_point((action, v) in instance(), seed in any::<u64>()) {
        let rep = analyze(&action, &v).unwrap();
        let xi = other_relint_point(&rep, action.n(), seed);
        let lim = reachable_limit(&action, &v, &xi).unwrap();
        prop_assert_eq!(lim.limit(), Some(&rep.v_tilde));
    }

    #[test]
    fn nilcone_certificates((action, v) in instance()) {
        let verdict = nilcone_member_exact(&action, &v).unwrap();
        let rep = analyze(&action, &v).unwrap();
        prop_assert_eq!(verdict.member, rep.nilpotent);
        prop_assert!(verdict.destabilizer.is_some() != verdict.invariant_monomial.is_some());
        let one = Rational::from_integer(1.into());
        if let Some(xi) = &verdict.destabilizer {
            for j in v.support() {
                prop_assert!(action.weight(j).pair(xi) >= one);
            }
            let lim = reachable_limit(&action, &v, xi).unwrap();
            prop_assert!(lim.limit().unwrap().is_zero());
        }
        if let Some(c) = &verdict.invariant_monomial {
            prop_assert!(c.iter().any(|&x| x > 0));
            prop_assert!(action.weight_of(c).iter().all(|&x| x == 0));
            prop_assert!(!v.exact_monomial(c).unwrap().is_zero());
        }
    }

    #[test]
    fn inner_points_pass_the_outer_test((action, v) in instance(), seed in any::<u64>()) {
        let rep = analyze(&action, &v).unwrap();
        let tester = HullTester::new(&action, &v).unwrap();
        let xi: Vec<f64> = rep.xi_star.iter().map(|x| num_traits::ToPrimitive::to_f64(x).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let theta: Vec<f64> = (0..action.n()).map(|_| rng.random_range(-3.2..3.2)).collect();
            let s: f64 = rng.random_range(0.0..3.0);
            let scaled: Vec<f64> = xi.iter().map(|x| x * s).collect();
            let z = hull_inner_sample(&action, &v, &theta, &scaled).unwrap();
            let verdict = tester.test(&z).unwrap();
            prop_assert!(verdict.outer_member, "{:?}", verdict.violated_constraint);
        }
    }
}

#[test]
fn fixture_verdicts() {
    for f in torus_fixtures() {
        let rep = analyze(&f.action, &f.v).unwrap();
        assert_eq!(rep.antisymmetric, f.antisymmetric, "{}", f.name);
        assert_eq!(rep.nilpotent, f.nilpotent, "{}", f.name);
        assert_eq!(rep.v_tilde, OrbitPoint::exact_integers(&f.v_tilde), "{}", f.name);
    }
}

#[test]
fn fixed_point_identity_and_alpha_law_on_fixtures() {
    for f in torus_fixtures() {
        let rep = analyze(&f.action, &f.v).unwrap();
        for c in exponents_up_to(f.action.m(), 6) {
            let mu = torus_monomial_average_exact(&f.action, &f.v, &c).unwrap();
            if rep.antisymmetric {
                assert_eq!(mu, rep.v_tilde.exact_monomial(&c).unwrap(), "{} {c:?}", f.name);
            }
            // μ = μ_{M̃} ∘ α in every case
            let through_alpha = match alpha_on_monomial(&rep, &c) {
                AlphaImage::Monomial { exponent } => torus_monomial_average_exact(&f.action, &rep.v_tilde, &exponent).unwrap(),
                AlphaImage::Zero => GaussianRational::zero(),
            };
            assert_eq!(mu, through_alpha, "{} {c:?}", f.name);
        }
        let low = exponents_up_to(f.action.m(), 4);
        for a in &low {
            for b in &low {
                let (ia, ib) = (alpha_on_monomial(&rep, a), alpha_on_monomial(&rep, b));
                if ia.is_zero() || ib.is_zero() {
                    continue;
                }
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                assert_eq!(alpha_on_monomial(&rep, &sum), AlphaImage::Monomial { exponent: sum.clone() });
            }
        }
    }
}

#[test]
fn hull_examples_from_fixtures() {
    for f in torus_fixtures() {
        let verdict = hull_outer_membership(&f.action, &f.v, &f.v).unwrap();
        assert!(verdict.outer_member, "{}", f.name);
        let float_v = OrbitPoint::Float(f.v.to_complex());
        assert!(hull_outer_membership(&f.action, &float_v, &float_v).unwrap().outer_member);
    }
}
