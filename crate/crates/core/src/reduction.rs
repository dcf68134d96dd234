//! Constructive decompositions of counterfactual utility tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::model::{ProblemSpace, UtilityTable};
use crate::rational::int;
use crate::{Error, Execution, Rational, Result};

/// A table cell with its value, used as a failure witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub d: usize,
    pub y: Vec<usize>,
    pub x: usize,
    pub value: Rational,
}

impl Cell {
    fn of(utility: &UtilityTable, d: usize, profile: usize, x: usize) -> Self {
        Cell {
            d,
            y: utility.space().profile(profile),
            x,
            value: utility.at(d, profile, x).clone(),
        }
    }
}

/// Two cells that a reduction requires to be equal but are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub first: Cell,
    pub second: Cell,
}

/// `u(d; a, x)`: a utility of the decision, one outcome and the covariate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTable {
    space: Arc<ProblemSpace>,
    values: Vec<Rational>,
}

impl ComponentTable {
    fn build(
        space: &Arc<ProblemSpace>,
        mut f: impl FnMut(usize, usize, usize) -> Rational,
    ) -> Self {
        let mut values =
            Vec::with_capacity(space.decisions() * space.outcome_count() * space.covariate_count());
        for d in 0..space.decisions() {
            for a in 0..space.outcome_count() {
                for x in 0..space.covariate_count() {
                    values.push(f(d, a, x));
                }
            }
        }
        ComponentTable {
            space: space.clone(),
            values,
        }
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn get(&self, d: usize, a: usize, x: usize) -> &Rational {
        let s = &self.space;
        &self.values[(d * s.outcome_count() + a) * s.covariate_count() + x]
    }

    /// `(d, a, x, value)` for every entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        let m = self.space.outcome_count();
        let xs = self.space.covariate_count();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (i / (m * xs), (i / xs) % m, i % xs, v))
    }

    /// The full table `ũ(d; y, x) = u(d; y_k, x)` for coordinate `k`.
    pub fn lift(&self, k: usize) -> UtilityTable {
        UtilityTable::from_fn(&self.space, |d, y, x| self.get(d, y[k], x).clone())
    }

    /// The standard table `ũ(d; y, x) = u(d; y_d, x)`.
    pub fn standard_table(&self) -> UtilityTable {
        UtilityTable::from_fn(&self.space, |d, y, x| self.get(d, y[d], x).clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveDecomposition {
    pub baseline: Vec<usize>,
    /// `components[k]` is `u_k(d; y_k, x)`.
    pub components: Vec<ComponentTable>,
    pub residual: Rational,
    /// Cell attaining the residual when it is positive.
    pub worst: Option<Cell>,
}

impl AdditiveDecomposition {
    pub fn is_additive(&self) -> bool {
        self.residual.is_zero()
    }

    /// `Σ_k u_k(d; y_k, x)` at a profile index.
    pub fn reconstruct(&self, d: usize, profile: usize, x: usize) -> Rational {
        let space = &self.components[0].space;
        self.components
            .iter()
            .enumerate()
            .map(|(k, c)| c.get(d, space.digit(profile, k), x))
            .sum()
    }
}

/// Lexicographically smallest profile, the default baseline.
pub fn default_baseline(space: &ProblemSpace) -> Vec<usize> {
    vec![0; space.decisions()]
}

/// Telescoping decomposition around `baseline`.
///
/// `u_k(d; a, x) = ũ(d; y'[k←a], x) − (K−1)/K · ũ(d; y', x)`, so that
/// `u_k(d; y'_k, x) = ũ(d; y', x)/K` and the components sum to `ũ` at the
/// baseline. The residual is the largest deviation over all cells.
pub fn additive_decompose(
    utility: &UtilityTable,
    baseline: &[usize],
) -> Result<AdditiveDecomposition> {
    additive_decompose_with(utility, baseline, Execution::default())
}

pub fn additive_decompose_with(
    utility: &UtilityTable,
    baseline: &[usize],
    exec: Execution,
) -> Result<AdditiveDecomposition> {
    let space = utility.space();
    space.check_profile(baseline)?;
    let k_count = space.decisions();
    let share = int(k_count as i64 - 1) / int(k_count as i64);
    let base = space.profile_index(baseline);
    let components: Vec<ComponentTable> = (0..k_count)
        .map(|k| {
            ComponentTable::build(space, |d, a, x| {
                utility.at(d, space.with_digit(base, k, a), x) - &share * utility.at(d, base, x)
            })
        })
        .collect();
    let mut out = AdditiveDecomposition {
        baseline: baseline.to_vec(),
        components,
        residual: Rational::zero(),
        worst: None,
    };
    let xs = space.covariate_count();
    let profiles = space.profile_count();
    let deviations = exec.map(space.law_cells(), |key| {
        let (d, rest) = (key / (profiles * xs), key % (profiles * xs));
        let (profile, x) = (rest / xs, rest % xs);
        (utility.at(d, profile, x) - out.reconstruct(d, profile, x)).abs()
    });
    for (key, dev) in deviations.into_iter().enumerate() {
        if dev > out.residual {
            let (d, rest) = (key / (profiles * xs), key % (profiles * xs));
            out.worst = Some(Cell::of(utility, d, rest / xs, rest % xs));
            out.residual = dev;
        }
    }
    Ok(out)
}

/// Result of a reduction attempt: the reduced utility or the first conflict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction<T> {
    Reduced(T),
    Failed(Conflict),
}

impl<T> Reduction<T> {
    pub fn reduced(&self) -> Option<&T> {
        match self {
            Reduction::Reduced(t) => Some(t),
            Reduction::Failed(_) => None,
        }
    }

    pub fn conflict(&self) -> Option<&Conflict> {
        match self {
            Reduction::Reduced(_) => None,
            Reduction::Failed(c) => Some(c),
        }
    }
}

/// `ū(d; y_d, x)` when `ũ(d; y, x)` depends on `y` only through `y_d`.
///
/// Cells are scanned by `(d, x)` and then profiles in lexicographic order; a
/// conflict pairs the first cell seen for a realized outcome with the first
/// cell that disagrees with it.
pub fn reduce_to_standard(utility: &UtilityTable) -> Reduction<ComponentTable> {
    let space = utility.space();
    let mut seen: Vec<Option<usize>> =
        vec![None; space.decisions() * space.outcome_count() * space.covariate_count()];
    for d in 0..space.decisions() {
        for x in 0..space.covariate_count() {
            for profile in 0..space.profile_count() {
                let a = space.digit(profile, d);
                let slot = &mut seen[(d * space.outcome_count() + a) * space.covariate_count() + x];
                match *slot {
                    None => *slot = Some(profile),
                    Some(first) if utility.at(d, first, x) != utility.at(d, profile, x) => {
                        return Reduction::Failed(Conflict {
                            first: Cell::of(utility, d, first, x),
                            second: Cell::of(utility, d, profile, x),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Reduction::Reduced(ComponentTable::build(space, |d, a, x| {
        let profile = seen[(d * space.outcome_count() + a) * space.covariate_count() + x]
            .expect("every outcome is realized by some profile");
        utility.at(d, profile, x).clone()
    }))
}

/// `u(y)` when every cell equals a function of the realized outcome alone.
pub fn reduce_to_outcome(utility: &UtilityTable) -> Reduction<Vec<Rational>> {
    let space = utility.space();
    let mut seen: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for d in 0..space.decisions() {
        for x in 0..space.covariate_count() {
            for profile in 0..space.profile_count() {
                let a = space.digit(profile, d);
                match seen.get(&a) {
                    None => {
                        seen.insert(a, (d, profile, x));
                    }
                    Some(&(d0, p0, x0)) if utility.at(d0, p0, x0) != utility.at(d, profile, x) => {
                        return Reduction::Failed(Conflict {
                            first: Cell::of(utility, d0, p0, x0),
                            second: Cell::of(utility, d, profile, x),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Reduction::Reduced(
        (0..space.outcome_count())
            .map(|a| {
                let (d, p, x) = seen[&a];
                utility.at(d, p, x).clone()
            })
            .collect(),
    )
}

/// `ũ(d; y, x) = u(d; y_d, x) + h(y, x)` for two decisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySplit {
    pub baseline: Vec<usize>,
    pub standard: ComponentTable,
    /// `h` indexed by `profile * |X| + x`.
    pub shared: Vec<Rational>,
    pub exact: bool,
    /// First cell the split fails to reproduce.
    pub mismatch: Option<Cell>,
}

impl BinarySplit {
    pub fn shared_at(&self, profile: usize, x: usize) -> &Rational {
        &self.shared[profile * self.standard.space.covariate_count() + x]
    }

    pub fn standard_table(&self) -> UtilityTable {
        self.standard.standard_table()
    }
}

/// Solves for `(u, h)` with `h(baseline, x) = 0`.
///
/// With `Δ(y) = ũ(0; y) − ũ(1; y)` and baseline `y'`, the candidate is
/// `u(0; a) = Δ(a, y'₁) + ũ(1; y')`, `u(1; b) = ũ(0; y') − Δ(y'₀, b)` and
/// `h(y) = ũ(0; y) − u(0; y₀)`. It reproduces `ũ` exactly iff a split exists.
pub fn binary_split(utility: &UtilityTable, baseline: &[usize]) -> Result<BinarySplit> {
    let space = utility.space();
    if space.decisions() != 2 {
        return Err(Error::Precondition(format!(
            "binary split needs two decisions, got {}",
            space.decisions()
        )));
    }
    space.check_profile(baseline)?;
    let base = space.profile_index(baseline);
    let delta = |profile: usize, x: usize| utility.at(0, profile, x) - utility.at(1, profile, x);
    let standard = ComponentTable::build(space, |d, a, x| match d {
        0 => delta(space.with_digit(base, 0, a), x) + utility.at(1, base, x),
        _ => utility.at(0, base, x) - delta(space.with_digit(base, 1, a), x),
    });
    let xs = space.covariate_count();
    let shared: Vec<Rational> = (0..space.state_cells())
        .map(|cell| {
            let (profile, x) = (cell / xs, cell % xs);
            utility.at(0, profile, x) - standard.get(0, space.digit(profile, 0), x)
        })
        .collect();
    let mismatch = utility.cells().find_map(|(d, profile, x, v)| {
        let rebuilt = standard.get(d, space.digit(profile, d), x) + &shared[profile * xs + x];
        (rebuilt != *v).then(|| Cell::of(utility, d, profile, x))
    });
    Ok(BinarySplit {
        baseline: baseline.to_vec(),
        standard,
        shared,
        exact: mismatch.is_none(),
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OutcomeSpace;
    use crate::rational::rat;

    fn binary(k: usize) -> Arc<ProblemSpace> {
        ProblemSpace::without_covariates(k, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap()
    }

    fn gm(space: &Arc<ProblemSpace>) -> UtilityTable {
        UtilityTable::from_fn(space, |d, y, _| match (d, y) {
            (0, [1, 0]) => int(1),
            (1, [0, 1]) => rat(1, 2),
            _ => int(0),
        })
    }

    #[test]
    fn sum_of_outcomes_is_additive_with_identity_components() {
        let space = binary(2);
        let u = UtilityTable::from_values_fn(&space, |_, v| &v[0] + &v[1]);
        let dec = additive_decompose(&u, &[0, 0]).unwrap();
        assert!(dec.is_additive());
        for d in 0..2 {
            for k in 0..2 {
                let c = &dec.components[k];
                assert_eq!(c.get(d, 1, 0) - c.get(d, 0, 0), int(1));
            }
            assert_eq!(
                dec.components[0].get(d, 0, 0) + dec.components[1].get(d, 0, 0),
                int(0)
            );
        }
    }

    #[test]
    fn gm_utility_fails_every_reduction() {
        let space = binary(2);
        let u = gm(&space);
        let dec = additive_decompose(&u, &default_baseline(&space)).unwrap();
        assert!(dec.residual.is_positive());
        assert!(dec.worst.is_some());
        let conflict = reduce_to_standard(&u).conflict().cloned().unwrap();
        assert_eq!(
            (
                conflict.first.d,
                conflict.first.y.clone(),
                conflict.first.value.clone()
            ),
            (0, vec![1, 0], int(1))
        );
        assert_eq!(
            (
                conflict.second.d,
                conflict.second.y.clone(),
                conflict.second.value.clone()
            ),
            (0, vec![1, 1], int(0))
        );
        assert!(reduce_to_outcome(&u).conflict().is_some());
        assert!(!binary_split(&u, &[0, 0]).unwrap().exact);
    }

    #[test]
    fn realized_outcome_utility_reduces_everywhere() {
        let space = binary(2);
        let u = UtilityTable::from_values_fn(&space, |d, v| v[d].clone());
        let std = reduce_to_standard(&u).reduced().cloned().unwrap();
        assert_eq!(std.standard_table(), u);
        assert_eq!(
            reduce_to_outcome(&u).reduced().unwrap(),
            &vec![int(0), int(1)]
        );
        let split = binary_split(&u, &[0, 0]).unwrap();
        assert!(split.exact);
        assert!(split.shared.iter().all(|h| h.is_zero()));
        assert_eq!(split.standard_table(), u);
    }

    #[test]
    fn decision_dependent_standard_utility_is_not_an_outcome_utility() {
        let space = binary(2);
        let u = UtilityTable::from_values_fn(&space, |d, v| {
            if d == 0 {
                v[0].clone()
            } else {
                int(2) * &v[1]
            }
        });
        assert!(reduce_to_standard(&u).reduced().is_some());
        assert!(reduce_to_outcome(&u).conflict().is_some());
    }

    #[test]
    fn covariate_constants_are_standard() {
        let space = ProblemSpace::new(
            2,
            OutcomeSpace::integers(&[0, 1]).unwrap(),
            vec!["lo".into(), "hi".into()],
        )
        .unwrap();
        let u = UtilityTable::from_fn(&space, |d, _, x| int((3 * x + d) as i64));
        let std = reduce_to_standard(&u).reduced().cloned().unwrap();
        assert_eq!(std.get(1, 0, 1), &int(4));
        assert_eq!(std.get(1, 1, 1), &int(4));
    }

    #[test]
    fn split_of_sum_puts_everything_in_h() {
        let space = binary(2);
        let u = UtilityTable::from_values_fn(&space, |_, v| &v[0] + &v[1]);
        let split = binary_split(&u, &[0, 0]).unwrap();
        assert!(split.exact);
        assert!(split.standard.entries().all(|(_, _, _, v)| v.is_zero()));
        for profile in 0..4 {
            let y = space.profile(profile);
            assert_eq!(split.shared_at(profile, 0), &int((y[0] + y[1]) as i64));
        }
        assert!(binary_split(&UtilityTable::zero(&binary(3)), &[0, 0, 0]).is_err());
    }
}
