use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use orbhull::lattice_cone::*;
use proptest::prelude::*;

fn weight_system(max_dim: usize, max_gens: usize, range: i64) -> impl Strategy<Value = (usize, Vec<WeightVector>)> {
    (1..=max_dim).prop_flat_map(move |n| {
        (
            Just(n),
            prop::collection::vec(prop::collection::vec(-range..=range, n).prop_map(WeightVector::new), 1..=max_gens),
        )
    })
}

fn semigroup(n: usize, gens: &[WeightVector]) -> WeightSemigroup {
    WeightSemigroup::new(n, gens.iter().cloned()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificates_always_validate((n, gens) in weight_system(4, 6, 5)) {
        let sg = semigroup(n, &gens);
        let p = cone_is_pointed(&sg);
        prop_assert!(p.validate(&sg));
        if let Pointedness::Pointed { functional } = &p {
            prop_assert!(validates_functional(sg.generators(), functional));
        }
    }

    #[test]
    fn enumerated_opposite_pairs_refute_antisymmetry((n, gens) in weight_system(3, 5, 4)) {
        let sg = semigroup(n, &gens);
        let bound = 4 * sg.max_entry().max(1);
        let ball = semigroup_enumerate(n, sg.generators(), bound, 1 << 24).unwrap();
        if let Some(s) = ball.opposite_pair() {
            prop_assert!(ball.contains(&s.neg().0));
            prop_assert!(!is_antisymmetric_semigroup(&sg));
        }
        if let Pointedness::NotPointed { combination } = cone_is_pointed(&sg) {
            // the combination is an explicit element s with -s in S
            prop_assert!(validates_zero_combination(sg.generators(), &combination));
        }
    }

    #[test]
    fn lineality_rank_zero_iff_antisymmetric((n, gens) in weight_system(4, 6, 5)) {
        let sg = semigroup(n, &gens);
        let lin = lineality_lattice(&sg).unwrap();
        prop_assert_eq!(lin.rank() == 0, is_antisymmetric_semigroup(&sg));
        for v in lin.vectors() {
            prop_assert!(lin.contains(&v.0));
        }
    }

    #[test]
    fn relint_point_separates_lineality((n, gens) in weight_system(4, 6, 5)) {
        let sg = semigroup(n, &gens);
        let xi = relint_dual_point(&sg).unwrap();
        for (g, member) in sg.generators().iter().zip(lineality_members(&sg)) {
            let p = g.pair(&xi);
            if member {
                prop_assert!(p.is_zero());
            } else {
                prop_assert!(p >= Rational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate_the_weights((_n, gens) in weight_system(3, 6, 5), coeffs in prop::collection::vec(-3i64..=3, 6)) {
        let ker = integer_kernel(&gens).unwrap();
        let dim = gens[0].dim();
        let rank = LatticeBasis::from_generators(dim, &gens).unwrap().rank();
        prop_assert_eq!(ker.rank() + rank, gens.len());
        let mut combo = vec![0i64; gens.len()];
        for (k, c) in ker.vectors().iter().zip(&coeffs) {
            for (x, y) in combo.iter_mut().zip(&k.0) {
                *x += c * y;
            }
        }
        for v in ker.vectors().iter().chain(std::iter::once(&WeightVector::new(combo.clone()))) {
            for d in 0..dim {
                let s: i64 = v.0.iter().zip(&gens).map(|(c, g)| c * g.0[d]).sum();
                prop_assert_eq!(s, 0);
            }
        }
        prop_assert!(ker.contains(&combo));
    }

    #[test]
    fn zero_combination_matches_pointedness((n, gens) in weight_system(4, 6, 5)) {
        let nonzero: Vec<WeightVector> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let sg = semigroup(n, &gens);
        let combo = zero_combination(n, &nonzero);
        prop_assert_eq!(combo.is_some(), !is_antisymmetric_semigroup(&sg));
        if let Some(c) = combo {
            prop_assert!(c.iter().all(|x| !x.is_negative()));
            prop_assert!(c.iter().any(|x| *x > BigInt::zero()));
        }
    }
}

#[test]
fn lp_certificates_on_textbook_cases() {
    let orthant = WeightSemigroup::from_rows(&[&[1, 0], &[0, 1]]).unwrap();
    let one = Rational::from_integer(1.into());
    assert_eq!(strict_positive_functional(&orthant), Some(vec![one.clone(), one.clone()]));
    let acute = WeightSemigroup::from_rows(&[&[2, -1], &[-1, 2]]).unwrap();
    assert_eq!(strict_positive_functional(&acute), Some(vec![one.clone(), one]));
    let line = WeightSemigroup::from_rows(&[&[1], &[-1]]).unwrap();
    match cone_is_pointed(&line) {
        Pointedness::NotPointed { combination } => assert_eq!(combination, vec![BigInt::from(1), BigInt::from(1)]),
        other => panic!("{other:?}"),
    }
}
