use orbhull::haar_numeric::{exp_skew, CMatrix, CompactMatrixGroup, GroupKind, Representation};
use orbhull::kempf_ness::*;
use orbhull::lattice_cone::WeightVector;
use orbhull::measure_mult::Polynomial;
use orbhull::torus_orbit::{nilcone_member_exact, OrbitPoint, TorusAction};
use orbhull::Complex64;
use proptest::prelude::*;

fn norm_sq(w: &[Complex64]) -> f64 {
    w.iter().map(|z| z.norm_sqr()).sum()
}

fn apply(g: &CMatrix, w: &[Complex64]) -> Vec<Complex64> {
    (0..g.nrows()).map(|r| (0..g.ncols()).map(|k| g[(r, k)] * w[k]).sum()).collect()
}

fn group_choice() -> impl Strategy<Value = CompactMatrixGroup> {
    prop_oneof![
        Just(CompactMatrixGroup::new(GroupKind::SpecialUnitary(2), Representation::Adjoint).unwrap()),
        Just(CompactMatrixGroup::new(GroupKind::SpecialOrthogonal(3), Representation::Defining).unwrap()),
        Just(CompactMatrixGroup::new(GroupKind::Unitary(2), Representation::Defining).unwrap()),
        Just(CompactMatrixGroup::torus(TorusAction::from_rows(&[&[1, 0], &[-1, 2], &[0, -1]]).unwrap())),
    ]
}

fn torus_instance() -> impl Strategy<Value = (TorusAction, Vec<i64>)> {
    (1usize..=2, 1usize..=4).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), m),
            prop::collection::vec(-2i64..=2, m),
        )
            .prop_filter("nonzero point", |(_, v)| v.iter().any(|&x| x != 0))
            .prop_map(move |(rows, v)| (TorusAction::new(n, rows.into_iter().map(WeightVector::new).collect()).unwrap(), v))
    })
}

fn as_complex(v: &[i64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_finite_differences(group in group_choice(), parts in prop::collection::vec(-1.5f64..1.5, 8)) {
        let d = group.rep_dim();
        let w: Vec<Complex64> = (0..d).map(|j| Complex64::new(parts[2 * j], parts[2 * j + 1])).collect();
        let grad = moment_gradient(&group, &w).unwrap();
        let h = 1e-6;
        for (x, gk) in group.rep_lie_basis().iter().zip(&grad) {
            let ix = x * Complex64::i();
            let f = |t: f64| norm_sq(&apply(&exp_skew(&ix, t), &w));
            let fd = (f(h) - f(-h)) / (2.0 * h);
            prop_assert!((fd - gk).abs() <= 1e-5 * gk.abs().max(1.0), "{} vs {}", fd, gk);
        }
    }

    #[test]
    fn flow_agrees_with_exact_nilcone((action, v) in torus_instance()) {
        let exact = nilcone_member_exact(&action, &OrbitPoint::exact_integers(&v)).unwrap();
        let group = CompactMatrixGroup::torus(action);
        let rep = flow_minimize(&group, &as_complex(&v), &FlowOptions::default()).unwrap();
        prop_assert!(rep.monotone);
        prop_assert!(rep.final_norm_sq <= rep.initial_norm_sq);
        if rep.is_conclusive() {
            prop_assert_eq!(rep.converged_to_zero, exact.member, "{:?}", rep);
        }
    }

    #[test]
    fn invariant_monomials_are_conserved((action, v) in torus_instance()) {
        let exact = nilcone_member_exact(&action, &OrbitPoint::exact_integers(&v)).unwrap();
        let Some(c) = exact.invariant_monomial else { return Ok(()) };
        let opts = FlowOptions {
            invariants: vec![NamedInvariant { label: "inv".into(), polynomial: Polynomial::monomial(c) }],
            ..FlowOptions::default()
        };
        let group = CompactMatrixGroup::torus(action);
        let rep = flow_minimize(&group, &as_complex(&v), &opts).unwrap();
        let r = &rep.invariant_residuals[0];
        prop_assert!(r.max_residual <= 1e-8 * r.initial_value.norm().max(1.0), "{:?}", r);
    }
}

#[test]
fn most_random_tori_are_conclusive() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut conclusive = 0;
    for _ in 0..60 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=5);
        let rows: Vec<WeightVector> = (0..m).map(|_| WeightVector::new((0..n).map(|_| rng.random_range(-3..=3)).collect())).collect();
        let mut v: Vec<i64> = (0..m).map(|_| rng.random_range(-2..=2)).collect();
        v[0] = 1;
        let action = TorusAction::new(n, rows).unwrap();
        let exact = nilcone_member_exact(&action, &OrbitPoint::exact_integers(&v)).unwrap();
        let rep = flow_minimize(&CompactMatrixGroup::torus(action), &as_complex(&v), &FlowOptions::default()).unwrap();
        if rep.is_conclusive() {
            conclusive += 1;
            assert_eq!(rep.converged_to_zero, exact.member);
        }
    }
    assert!(conclusive >= 54, "{conclusive}/60");
}
