mod common;

use cfdt::axioms::{
    alpha_grid, classify_utility, continuity_witness, search_independence, transitivity_of_values,
    verify_continuity,
};
use cfdt::model::Law;
use cfdt::rational::rat;
use cfdt::reduction::{additive_decompose, default_baseline};
use cfdt::valuation::{affine_transform, compare, expected_utility};
use cfdt::{Execution, Rational};
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #[test]
    fn affine_transform_keeps_every_verdict(
        (u, p, q) in small_space().prop_flat_map(|sp| (table(sp.clone()), law(sp.clone()), law(sp))),
        a in positive(),
        b in rational(),
    ) {
        let v = affine_transform(&u, &a, &b).unwrap();
        prop_assert_eq!(compare(&p, &q, &u).unwrap().verdict, compare(&p, &q, &v).unwrap().verdict);
        prop_assert!(affine_transform(&u, &Rational::zero(), &b).is_err());
    }

    #[test]
    fn expected_utility_is_linear_in_the_law(
        (u, p, q) in small_space().prop_flat_map(|sp| (table(sp.clone()), law(sp.clone()), law(sp))),
        n in 0i64..=8,
    ) {
        let alpha = rat(n, 8);
        let mixed = Law::mix(&[p.clone(), q.clone()], &[alpha.clone(), Rational::one() - &alpha]).unwrap();
        let lhs = expected_utility(&mixed, &u).unwrap();
        let rhs = &alpha * expected_utility(&p, &u).unwrap()
            + (Rational::one() - &alpha) * expected_utility(&q, &u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_class_matches_zero_residual(
        u in small_space().prop_flat_map(|sp| prop_oneof![table(sp.clone()), additive_table(sp)])
    ) {
        let residual = additive_decompose(&u, &default_baseline(u.space())).unwrap().residual;
        prop_assert_eq!(classify_utility(&u).additive, residual.is_zero());
    }

    #[test]
    fn expected_utility_families_pass_the_searches(
        (u, family) in small_space().prop_flat_map(|sp| {
            (table(sp.clone()), proptest::collection::vec(law(sp), 2..=4))
        })
    ) {
        let eu = |l: &Law| expected_utility(l, &u);
        let trans = transitivity_of_values(&family, eu, Execution::Sequential).unwrap();
        prop_assert!(trans.holds);
        let found = search_independence(&family, &alpha_grid(4), eu, Execution::default()).unwrap();
        prop_assert!(found.holds, "{:?}", found.witness);
    }

    #[test]
    fn continuity_witnesses_reverify(
        (u, p, q, r) in small_space().prop_flat_map(|sp| {
            (table(sp.clone()), law(sp.clone()), law(sp.clone()), law(sp))
        })
    ) {
        let (vp, vq, vr) = (
            expected_utility(&p, &u).unwrap(),
            expected_utility(&q, &u).unwrap(),
            expected_utility(&r, &u).unwrap(),
        );
        if vp > vq && vq > vr {
            let w = continuity_witness(&p, &q, &r, &u).unwrap();
            prop_assert!(verify_continuity(&p, &q, &r, &u, &w).unwrap());
        } else {
            prop_assert!(continuity_witness(&p, &q, &r, &u).is_err());
        }
    }
}
