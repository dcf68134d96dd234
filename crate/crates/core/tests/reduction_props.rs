mod common;

use cfdt::model::{Law, Policy};
use cfdt::rational::int;
use cfdt::reduction::{additive_decompose, binary_split, default_baseline};
use cfdt::valuation::{compare, expected_utility, value};
use cfdt::Rational;
use common::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn additive_tables_round_trip(
        (u, base) in small_space().prop_flat_map(|sp| {
            let m = sp.outcome_count();
            (additive_table(sp.clone()), proptest::collection::vec(0..m, sp.decisions()))
        })
    ) {
        let dec = additive_decompose(&u, &base).unwrap();
        prop_assert_eq!(&dec.residual, &int(0));
        prop_assert!(dec.worst.is_none());
        for (d, p, x, v) in u.cells() {
            prop_assert_eq!(&dec.reconstruct(d, p, x), v);
        }
    }

    #[test]
    fn additivity_does_not_depend_on_the_baseline(
        u in small_space().prop_flat_map(|sp| prop_oneof![table(sp.clone()), additive_table(sp)])
    ) {
        let sp = u.space().clone();
        let verdicts: Vec<bool> = (0..sp.profile_count())
            .map(|p| additive_decompose(&u, &sp.profile(p)).unwrap().is_additive())
            .collect();
        prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]));
    }

    #[test]
    fn components_carry_the_expected_utility(
        (u, s) in small_space().prop_flat_map(|sp| (additive_table(sp.clone()), state(sp)))
    ) {
        let sp = u.space().clone();
        let dec = additive_decompose(&u, &default_baseline(&sp)).unwrap();
        for d in 0..sp.decisions() {
            let law = Law::deterministic(d, &s).unwrap();
            let parts: Rational = dec.components.iter().enumerate()
                .map(|(k, c)| expected_utility(&law, &c.lift(k)).unwrap())
                .sum();
            prop_assert_eq!(parts, expected_utility(&law, &u).unwrap());
        }
    }

    #[test]
    fn binary_split_preserves_policy_rankings(
        (std, h, s, pi, rho) in Just(space(2, 3)).prop_flat_map(|sp| (
            proptest::collection::vec(rational(), 6),
            proptest::collection::vec(rational(), sp.profile_count()),
            state(sp.clone()),
            oracle(sp.clone()),
            oracle(sp),
        ))
    ) {
        let sp = s.space().clone();
        let u = cfdt::model::UtilityTable::from_fn(&sp, |d, y, _| &std[d * 3 + y[d]] + &h[sp.profile_index(y)]);
        let split = binary_split(&u, &[0, 0]).unwrap();
        prop_assert!(split.exact && split.mismatch.is_none());
        let standard = split.standard_table();
        let law = |p: &Policy| cfdt::model::induced_law(p, &s).unwrap();
        prop_assert_eq!(
            compare(&law(&pi), &law(&rho), &u).unwrap().verdict,
            compare(&law(&pi), &law(&rho), &standard).unwrap().verdict
        );
        let gap = value(&pi, &s, &u).unwrap() - value(&pi, &s, &standard).unwrap();
        prop_assert_eq!(gap, value(&rho, &s, &u).unwrap() - value(&rho, &s, &standard).unwrap());
    }
}

#[test]
fn split_can_reorder_states() {
    let sp = binary();
    let sum = cfdt::model::UtilityTable::from_values_fn(&sp, |_, v| &v[0] + &v[1]);
    let split = binary_split(&sum, &[0, 0]).unwrap();
    assert!(split.exact);
    let p = Law::deterministic(0, &cfdt::model::State::dirac(&sp, &[0, 1], 0).unwrap()).unwrap();
    let q = Law::deterministic(0, &cfdt::model::State::dirac(&sp, &[0, 0], 0).unwrap()).unwrap();
    let full = compare(&p, &q, &sum).unwrap().verdict;
    let standard = compare(&p, &q, &split.standard_table()).unwrap().verdict;
    assert_ne!(full, standard);
}

#[test]
fn gm_utility_is_not_additive() {
    let sp = binary();
    let dec = additive_decompose(&gm(&sp), &[0, 0]).unwrap();
    assert!(dec.residual > int(0));
    let worst = dec.worst.expect("worst cell");
    assert_eq!(worst.y.len(), 2);
}
