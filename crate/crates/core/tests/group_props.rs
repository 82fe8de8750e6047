use orbhull::group_structure::*;
use orbhull::haar_numeric::{lie, CMatrix, CompactMatrixGroup, GroupKind, SamplerState};
use orbhull::Complex64;
use proptest::prelude::*;

#[test]
fn preset_pairs() {
    let so3 = normalizer_subalgebra(&LieSubalgebraPair::so3_so2());
    assert!(so3.condition_f_infinitesimal);
    assert_eq!((so3.dim_g, so3.dim_h, so3.dim_normalizer), (3, 1, 1));
    assert!(so3.max_residual <= 1e-8);

    let su2 = normalizer_subalgebra(&LieSubalgebraPair::su2_su2());
    assert!(su2.condition_f_infinitesimal);
    assert_eq!(su2.dim_normalizer, 3);

    for n in 1..=3 {
        let t = normalizer_subalgebra(&LieSubalgebraPair::torus_trivial(n).unwrap());
        assert!(!t.condition_f_infinitesimal);
        assert_eq!(t.dim_normalizer, n);
        assert!(t.max_residual <= 1e-8);
    }
}

#[test]
fn invalid_pairs_are_rejected() {
    let so3 = lie::so_basis(3);
    // h not closed: two of the three generators
    assert!(LieSubalgebraPair::new(so3.clone(), so3[..2].to_vec()).is_err());
    // h outside g
    assert!(LieSubalgebraPair::new(so3[..1].to_vec(), vec![so3[1].clone()]).is_err());
    // dependent basis
    assert!(LieSubalgebraPair::new(vec![so3[0].clone(), so3[0].scale(2.0)], vec![]).is_err());
}

fn rotated(basis: &[CMatrix], g: &CMatrix) -> Vec<CMatrix> {
    basis.iter().map(|x| g * x * g.adjoint()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn normalizer_is_conjugation_equivariant(seed in any::<u64>(), k in 0usize..8) {
        // Conjugating both algebras by a unitary leaves every dimension unchanged.
        let su3 = CompactMatrixGroup::defining(GroupKind::SpecialUnitary(3)).unwrap();
        let u = orbhull::haar_numeric::haar_sample(&su3, SamplerState::new(seed)).matrix;
        let g = lie::su_basis(3);
        let h = vec![g[k].clone()];
        let base = normalizer_subalgebra(&LieSubalgebraPair::new(g.clone(), h.clone()).unwrap());
        let moved = normalizer_subalgebra(&LieSubalgebraPair::new(rotated(&g, &u), rotated(&h, &u)).unwrap());
        prop_assert_eq!(base.dim_normalizer, moved.dim_normalizer);
        prop_assert!(moved.max_residual <= 1e-8);
        prop_assert!(!base.condition_f_infinitesimal);
    }
}

#[test]
fn multiplicities_are_near_integers() {
    let st = SamplerState::new(8);
    for ell in 0..=4 {
        let m = fixed_multiplicity(&So3Irrep { ell }, &So2InSo3, 20_000, st.advanced(u64::from(ell) << 40));
        assert!((m.estimate - m.estimate.round()).abs() <= 4.0 * m.std_error + 1e-12, "{ell}: {m:?}");
        assert!((m.estimate - 1.0).abs() <= 4.0 * m.std_error + 1e-12);
    }
    for two_j in 0..=4 {
        let m = fixed_multiplicity(&Su2Irrep { two_j }, &CenterOfSu2, 2_000, st);
        let expected = if two_j % 2 == 0 { f64::from(two_j + 1) } else { 0.0 };
        assert!((m.estimate - expected).abs() <= 4.0 * m.std_error + 1e-12, "{two_j}: {m:?}");
    }
}

#[test]
fn gelfand_verdict_is_monotone_in_threshold() {
    let family: Vec<Box<dyn RepEvaluator>> = (0..=3).map(|two_j| Box::new(Su2Irrep { two_j }) as Box<dyn RepEvaluator>).collect();
    let refs: Vec<&dyn RepEvaluator> = family.iter().map(|b| b.as_ref()).collect();
    let mut was_free = false;
    for threshold in [0.0, 0.05, 0.5, 1.0, 1.5, 2.5] {
        let rep = gelfand_check(&refs, &CenterOfSu2, 1_000, threshold, SamplerState::new(3), None);
        assert!(!was_free || rep.multiplicity_free, "threshold {threshold}");
        was_free = rep.multiplicity_free;
    }
    assert!(was_free);
}

#[test]
fn character_norm_detects_reducible_input() {
    struct Doubled;
    impl RepEvaluator for Doubled {
        fn label(&self) -> String {
            "2*triv".into()
        }
        fn dim(&self) -> usize {
            2
        }
        fn character(&self, _g: &CMatrix) -> Complex64 {
            Complex64::new(2.0, 0.0)
        }
    }
    let so3 = GroupSampler(CompactMatrixGroup::defining(GroupKind::SpecialOrthogonal(3)).unwrap());
    let rep = gelfand_check(&[&Doubled, &So3Irrep { ell: 2 }], &So2InSo3, 20_000, 0.05, SamplerState::new(1), Some(&so3));
    assert!(rep.entries[0].irreducibility_warning);
    assert!(!rep.entries[1].irreducibility_warning, "{:?}", rep.entries[1]);
    assert!(!rep.multiplicity_free);
    assert_eq!(rep.violators.len(), 1);
}
