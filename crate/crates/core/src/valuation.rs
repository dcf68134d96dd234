//! Expected counterfactual utility and the preference it induces on laws.

use std::cmp::Ordering;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::model::{induced_law, Law, Policy, ProblemSpace, State, UtilityTable};
use crate::rational::{from_f64_exact, to_f64};
use crate::{Error, Rational, Result};

/// `Σ ũ(d; y, x) · P^π(d, y, x)`.
pub fn expected_utility(law: &Law, utility: &UtilityTable) -> Result<Rational> {
    crate::model::same_space(law.space(), utility.space())
        .then_some(())
        .ok_or_else(|| Error::SpaceMismatch("law and utility".into()))?;
    let mut total = Rational::zero();
    for (key, p) in law.raw_entries() {
        total += utility.raw(key) * p;
    }
    Ok(total)
}

/// `V_P(π; ũ)`.
pub fn value(policy: &Policy, state: &State, utility: &UtilityTable) -> Result<Rational> {
    expected_utility(&induced_law(policy, state)?, utility)
}

/// `V_P(d; ũ)` for the deterministic policy `d`.
pub fn decision_value(d: usize, state: &State, utility: &UtilityTable) -> Result<Rational> {
    value(&Policy::dirac(state.space(), d)?, state, utility)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StrictlyPrefersLeft,
    Indifferent,
    StrictlyPrefersRight,
}

impl Verdict {
    pub fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Greater => Verdict::StrictlyPrefersLeft,
            Ordering::Equal => Verdict::Indifferent,
            Ordering::Less => Verdict::StrictlyPrefersRight,
        }
    }

    /// Weak preference of left over right.
    pub fn left_weakly_preferred(self) -> bool {
        self != Verdict::StrictlyPrefersRight
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::StrictlyPrefersLeft => "≻",
            Verdict::Indifferent => "∼",
            Verdict::StrictlyPrefersRight => "≺",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preference {
    pub verdict: Verdict,
    pub left_value: Rational,
    pub right_value: Rational,
}

impl Preference {
    pub fn from_values(left_value: Rational, right_value: Rational) -> Self {
        Preference {
            verdict: Verdict::from_ordering(left_value.cmp(&right_value)),
            left_value,
            right_value,
        }
    }
}

pub fn compare(left: &Law, right: &Law, utility: &UtilityTable) -> Result<Preference> {
    Ok(Preference::from_values(
        expected_utility(left, utility)?,
        expected_utility(right, utility)?,
    ))
}

/// `a · ũ + b` for `a > 0`.
pub fn affine_transform(
    utility: &UtilityTable,
    a: &Rational,
    b: &Rational,
) -> Result<UtilityTable> {
    if !a.is_positive() {
        return Err(Error::InvalidArgument(
            "affine transform needs a positive scale".into(),
        ));
    }
    Ok(utility.map(|v| a * v + b))
}

/// `f_λ(r) = 1 − exp(−λ r)`, evaluated in double precision.
pub fn regret(lambda: f64, r: f64) -> f64 {
    1.0 - (-lambda * r).exp()
}

/// Regret-rejoicing utility `ũ(d; y) = y_d + Σ_{d'≠d} f_λ(y_d − y_{d'})` over
/// every decision of the space.
///
/// The regret terms are computed in `f64` and frozen to their exact binary
/// value; the realized outcome `y_d` stays exact.
pub fn bell_utility(space: &Arc<ProblemSpace>, lambda: f64) -> Result<UtilityTable> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "regret steepness must be positive and finite, got {lambda}"
        )));
    }
    let values: Vec<f64> = space.outcomes().values().iter().map(to_f64).collect();
    let exact = space.outcomes().values().to_vec();
    UtilityTable::try_from_fn(space, |d, y, _| {
        let mut f = 0.0;
        for (k, &yk) in y.iter().enumerate() {
            if k != d {
                f += regret(lambda, values[y[d]] - values[yk]);
            }
        }
        Ok(&exact[y[d]] + from_f64_exact(f)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OutcomeSpace, ProblemSpace};
    use crate::rational::{int, rat};

    fn rr() -> (Arc<ProblemSpace>, State, UtilityTable) {
        let space =
            ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap();
        let state = State::independent(
            &space,
            &[vec![rat(1, 6), rat(5, 6)], vec![rat(1, 7), rat(6, 7)]],
            0,
        )
        .unwrap();
        let gm = UtilityTable::from_fn(&space, |d, y, _| match (d, y) {
            (0, [1, 0]) => int(1),
            (1, [0, 1]) => rat(1, 2),
            _ => int(0),
        });
        (space, state, gm)
    }

    #[test]
    fn russian_roulette_values() {
        let (_, state, gm) = rr();
        let v0 = decision_value(0, &state, &gm).unwrap();
        let v1 = decision_value(1, &state, &gm).unwrap();
        assert_eq!(v0, rat(5, 42));
        assert_eq!(v1, rat(1, 14));
        assert_eq!(v1 - v0, rat(-1, 21));
    }

    #[test]
    fn zero_utility_and_scaling() {
        let (space, state, gm) = rr();
        let law = Law::deterministic(1, &state).unwrap();
        assert_eq!(
            expected_utility(&law, &UtilityTable::zero(&space)).unwrap(),
            int(0)
        );
        let doubled = affine_transform(&gm, &int(2), &int(0)).unwrap();
        let gap = decision_value(1, &state, &doubled).unwrap()
            - decision_value(0, &state, &doubled).unwrap();
        assert_eq!(gap, rat(-2, 21));
        assert_eq!(affine_transform(&gm, &int(1), &int(0)).unwrap(), gm);
        assert!(affine_transform(&gm, &int(0), &int(1)).is_err());
        assert!(affine_transform(&gm, &int(-1), &int(1)).is_err());
    }

    #[test]
    fn compare_is_reflexive() {
        let (_, state, gm) = rr();
        let p = Law::deterministic(0, &state).unwrap();
        assert_eq!(compare(&p, &p, &gm).unwrap().verdict, Verdict::Indifferent);
    }

    #[test]
    fn bell_rejects_bad_steepness_and_vanishes_on_ties() {
        let space =
            ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 3000, 4000]).unwrap())
                .unwrap();
        assert_eq!(regret(0.7, 0.0), 0.0);
        assert!(bell_utility(&space, 0.0).is_err());
        assert!(bell_utility(&space, -1.0).is_err());
        assert!(bell_utility(&space, f64::NAN).is_err());
        let u = bell_utility(&space, 0.003).unwrap();
        assert_eq!(u.get(0, &[1, 1], 0), &int(3000));
        assert_eq!(u.get(1, &[2, 2], 0), &int(4000));
    }
}
