mod common;

use cfdt::axioms::check_independence;
use cfdt::extended::{
    build_phi, check_crossing_assumptions, check_equivalence, phi0_monotonicity, product_contrast,
    product_extension, ContrastForm, ExtendedUtility, Interval, PhiValue,
};
use cfdt::model::{Law, State};
use cfdt::rational::{int, rat};
use cfdt::valuation::decision_value;
use cfdt::Rational;
use common::*;
use proptest::prelude::*;

fn probability() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|n| rat(n, 12))
}

/// Bilinear contrasts increasing in `p₁` and decreasing in `p₀` on the unit square.
fn monotone_bilinear() -> impl Strategy<Value = ContrastForm> {
    (rational(), positive(), positive(), -6i64..=6).prop_map(|(c, a, b, t)| {
        let bound = a.clone().min(b.clone());
        let c01 = &bound * rat(t, 7);
        ContrastForm::bilinear(c, -a, b, c01, Interval::unit())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn additive_extensions_respect_independence(
        (alpha, beta, p, q, r, n) in Just(binary()).prop_flat_map(|sp| (
            proptest::collection::vec(rational(), 2),
            proptest::collection::vec(proptest::collection::vec(rational(), 2), 2),
            law(sp.clone()),
            law(sp.clone()),
            law(sp),
            1i64..=8,
        ))
    ) {
        let ext = ExtendedUtility::additive(&binary(), alpha, beta).unwrap();
        let report = check_independence(&p, &q, &r, &rat(n, 8), |l| ext.value(l)).unwrap();
        prop_assert!(report.holds, "{:?}", report.witness);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_extension_is_the_independent_expectation(
        values in proptest::collection::vec(rational(), 8),
        p0 in probability(),
        p1 in probability(),
    ) {
        let sp = binary();
        let u = table_from(&sp, &values);
        let ext = product_extension(&u).unwrap();
        let s = State::independent(&sp, &[vec![int(1) - &p0, p0.clone()], vec![int(1) - &p1, p1.clone()]], 0).unwrap();
        for d in 0..2 {
            prop_assert_eq!(ext.at(d, &[p0.clone(), p1.clone()]).unwrap(), decision_value(d, &s, &u).unwrap());
        }
        let gap = decision_value(1, &s, &u).unwrap() - decision_value(0, &s, &u).unwrap();
        prop_assert_eq!(product_contrast(&u).unwrap().eval(&p0, &p1), gap);
    }

    #[test]
    fn phi_reproduces_the_contrast_sign(form in monotone_bilinear()) {
        let step = rat(1, 16);
        let crossing = check_crossing_assumptions(&form, &step).unwrap();
        prop_assert!(crossing.passes(), "{:?}", crossing.violations);
        let phi = build_phi(&form).unwrap();
        let eq = check_equivalence(&form, &phi, &step).unwrap();
        prop_assert!(eq.holds() && eq.indeterminate == 0, "{:?}", eq.first_mismatch);
        prop_assert_eq!(phi0_monotonicity(&phi, &step).unwrap(), None);
    }

}

proptest! {
    // Every grid root is a 40-step bisection; keep the case count modest.
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tabulated_forms_agree_up_to_brackets(form in monotone_bilinear()) {
        let grid = form.tabulate(&rat(1, 8)).unwrap();
        prop_assume!(check_crossing_assumptions(&grid, &rat(1, 8)).unwrap().passes());
        let phi = build_phi(&grid).unwrap();
        let eq = check_equivalence(&grid, &phi, &rat(1, 8)).unwrap();
        prop_assert_eq!(eq.mismatches, 0);
        prop_assert_eq!(phi0_monotonicity(&phi, &rat(1, 8)).unwrap(), None);
    }
}

#[test]
fn lattice_points_of_the_gm_product_form() {
    let sp = binary();
    let form = product_contrast(&gm(&sp)).unwrap();
    let phi = build_phi(&form).unwrap();
    for (p0, want) in [(rat(1, 4), rat(2, 5)), (rat(3, 4), rat(6, 7))] {
        assert_eq!(phi.phi0(&p0), PhiValue::Exact(want));
    }
    let q = Law::deterministic(0, &State::dirac(&sp, &[1, 1], 0).unwrap()).unwrap();
    assert!(product_extension(&gm(&sp)).unwrap().value(&q).is_ok());
}

#[test]
fn inadmissible_forms_are_rejected() {
    // Increasing in p0: no decision-monotone reduction exists.
    let bad = ContrastForm::bilinear(int(0), int(1), int(1), int(0), Interval::unit());
    assert!(!check_crossing_assumptions(&bad, &rat(1, 4))
        .unwrap()
        .passes());
    assert!(build_phi(&bad).is_err());
    let wide = cfdt::model::OutcomeSpace::integers(&[0, 1, 2]).unwrap();
    let sp = cfdt::model::ProblemSpace::without_covariates(2, wide).unwrap();
    assert!(product_extension(&cfdt::model::UtilityTable::zero(&sp)).is_err());
}
