//! Generators shared by the property suites.
#![allow(dead_code)]

use std::sync::Arc;

use cfdt::model::{Law, OutcomeSpace, Policy, ProblemSpace, State, UtilityTable};
use cfdt::rational::{int, rat};
use cfdt::Rational;
use proptest::prelude::*;

pub fn space(k: usize, m: i64) -> Arc<ProblemSpace> {
    let outcomes = OutcomeSpace::integers(&(0..m).collect::<Vec<_>>()).unwrap();
    ProblemSpace::without_covariates(k, outcomes).unwrap()
}

pub fn binary() -> Arc<ProblemSpace> {
    space(2, 2)
}

pub fn gm(space: &Arc<ProblemSpace>) -> UtilityTable {
    UtilityTable::from_fn(space, |d, y, _| match (d, y[0], y[1]) {
        (0, 1, 0) => int(1),
        (1, 0, 1) => rat(1, 2),
        _ => int(0),
    })
}

/// Small signed rationals with denominators up to 6.
pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

/// Probability vector of length `n` with at least one positive entry.
pub fn simplex(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(0i64..6, n).prop_map(move |mut w| {
        if w.iter().all(|&v| v == 0) {
            w[0] = 1;
        }
        let total: i64 = w.iter().sum();
        w.into_iter().map(|v| rat(v, total)).collect()
    })
}

pub fn table_from(space: &Arc<ProblemSpace>, values: &[Rational]) -> UtilityTable {
    let profiles = space.profile_count();
    UtilityTable::from_fn(space, |d, y, _| {
        values[d * profiles + space.profile_index(y)].clone()
    })
}

pub fn table(space: Arc<ProblemSpace>) -> impl Strategy<Value = UtilityTable> {
    let n = space.decisions() * space.profile_count();
    proptest::collection::vec(rational(), n).prop_map(move |v| table_from(&space, &v))
}

pub fn state(space: Arc<ProblemSpace>) -> impl Strategy<Value = State> {
    simplex(space.profile_count()).prop_map(move |w| {
        State::new(
            &space,
            w.into_iter()
                .enumerate()
                .map(|(p, m)| (space.profile(p), 0, m)),
        )
        .unwrap()
    })
}

/// Law supported on up to four random cells.
pub fn law(space: Arc<ProblemSpace>) -> impl Strategy<Value = Law> {
    let cells = space.decisions() * space.profile_count();
    (1usize..=4)
        .prop_flat_map(move |n| (proptest::collection::vec(0..cells, n), simplex(n)))
        .prop_map(move |(at, w)| {
            let profiles = space.profile_count();
            Law::new(
                &space,
                at.into_iter()
                    .zip(w)
                    .map(|(c, m)| (c / profiles, space.profile(c % profiles), 0, m)),
            )
            .unwrap()
        })
}

/// Oracle policy with one random conditional per profile.
pub fn oracle(space: Arc<ProblemSpace>) -> impl Strategy<Value = Policy> {
    proptest::collection::vec(simplex(space.decisions()), space.profile_count()).prop_map(
        move |rows| {
            let entries = rows
                .into_iter()
                .enumerate()
                .map(|(p, r)| (space.profile(p), 0, r));
            Policy::oracle(&space, entries).unwrap()
        },
    )
}

/// `Σ_k u_k(d; y_k)` from `parts[(d * K + k) * M + y_k]`.
pub fn additive_from(space: &Arc<ProblemSpace>, parts: &[Rational]) -> UtilityTable {
    let (k, m) = (space.decisions(), space.outcome_count());
    UtilityTable::from_fn(space, |d, y, _| {
        y.iter()
            .enumerate()
            .map(|(j, &a)| parts[(d * k + j) * m + a].clone())
            .sum()
    })
}

pub fn additive_table(space: Arc<ProblemSpace>) -> impl Strategy<Value = UtilityTable> {
    let n = space.decisions() * space.decisions() * space.outcome_count();
    proptest::collection::vec(rational(), n).prop_map(move |p| additive_from(&space, &p))
}

/// Spaces small enough for exhaustive checks.
pub fn small_space() -> impl Strategy<Value = Arc<ProblemSpace>> {
    prop_oneof![Just((2usize, 2i64)), Just((2, 3)), Just((3, 2))].prop_map(|(k, m)| space(k, m))
}
