mod common;

use cfdt::model::{independent_coupling, induced_law, Law, Policy, State};
use cfdt::rational::rat;
use cfdt::Rational;
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn total(law: &Law) -> Rational {
    law.entries().map(|(_, _, _, p)| p.clone()).sum()
}

proptest! {
    #[test]
    fn induced_law_keeps_unit_mass(
        (s, pi) in small_space().prop_flat_map(|sp| (state(sp.clone()), oracle(sp)))
    ) {
        let law = induced_law(&pi, &s).unwrap();
        prop_assert_eq!(total(&law), Rational::one());
        prop_assert!(law.entries().all(|(_, _, _, p)| *p > Rational::zero()));
        prop_assert_eq!(law.state_part(), s);
    }

    #[test]
    fn dirac_on_independent_coupling_has_the_given_marginals(
        (sp, ms, d) in small_space().prop_flat_map(|sp| {
            let m = sp.outcome_count();
            let k = sp.decisions();
            (Just(sp), proptest::collection::vec(simplex(m), k), 0..k)
        })
    ) {
        let coupling = independent_coupling(&sp, &ms, 0).unwrap();
        let law = induced_law(&Policy::dirac(&sp, d).unwrap(), &coupling).unwrap();
        let marginals = law.marginals();
        for (k, m) in ms.iter().enumerate() {
            prop_assert_eq!(marginals.of_decision(k), &m[..]);
        }
        let mut decisions = vec![Rational::zero(); sp.decisions()];
        decisions[d] = Rational::one();
        prop_assert_eq!(law.decision_marginal(), decisions);
    }

    #[test]
    fn mixing_is_associative(
        (p, q, r) in small_space().prop_flat_map(|sp| (law(sp.clone()), law(sp.clone()), law(sp))),
        w in simplex(3),
    ) {
        prop_assume!(!(&w[0] + &w[1]).is_zero());
        let direct = Law::mix(&[p.clone(), q.clone(), r.clone()], &w).unwrap();
        let ab = &w[0] + &w[1];
        let inner = Law::mix(&[p.clone(), q.clone()], &[&w[0] / &ab, &w[1] / &ab]).unwrap();
        let nested = Law::mix(&[inner, r.clone()], &[ab, w[2].clone()]).unwrap();
        prop_assert_eq!(&direct, &nested);
        let swapped = Law::mix(&[r, q, p], &[w[2].clone(), w[1].clone(), w[0].clone()]).unwrap();
        prop_assert_eq!(direct, swapped);
    }

    #[test]
    fn state_mixture_mixes_marginals(
        (a, b) in small_space().prop_flat_map(|sp| (state(sp.clone()), state(sp))),
        w in simplex(2),
    ) {
        let mixed = State::mix(&[a.clone(), b.clone()], &w).unwrap().marginals();
        let (ma, mb) = (a.marginals(), b.marginals());
        for k in 0..a.space().decisions() {
            let want: Vec<Rational> = ma.of_decision(k).iter().zip(mb.of_decision(k))
                .map(|(x, y)| &w[0] * x + &w[1] * y)
                .collect();
            prop_assert_eq!(mixed.of_decision(k), &want[..]);
        }
    }
}

#[test]
fn invalid_masses_are_rejected() {
    let sp = binary();
    let half = rat(1, 2);
    assert!(State::new(&sp, [(vec![0, 0], 0, half.clone())]).is_err());
    assert!(State::new(
        &sp,
        [(vec![0, 0], 0, -half.clone()), (vec![1, 1], 0, rat(3, 2))]
    )
    .is_err());
    assert!(State::dirac(&sp, &[0, 2], 0).is_err());
    assert!(Policy::dirac(&sp, 2).is_err());
}
