//! Sharp bounds on expected counterfactual utility over all couplings of
//! fixed per-decision marginals.
//!
//! The identified set is the transportation polytope
//! `{P ≥ 0 : P(Y(k) = a) = m_k(a) for all k, a}`. Its extreme points are found by
//! exact simplex over the product of the marginal supports, since any
//! profile using an outcome of zero marginal mass is forced to zero.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::model::{same_space, ProblemSpace, State, UtilityTable};
use crate::simplex::{LinearProgram, Sense};
use crate::{Error, Execution, Rational, Result};

pub const DEFAULT_MAX_VARIABLES: usize = 1_000_000;
pub const MAX_VARIABLES_ENV: &str = "CFDT_LP_MAX_VARIABLES";

/// Variable cap from the environment, or [`DEFAULT_MAX_VARIABLES`].
pub fn max_variables() -> usize {
    std::env::var(MAX_VARIABLES_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_VARIABLES)
}

/// Identified per-decision outcome marginals at covariate `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalsSpec {
    space: Arc<ProblemSpace>,
    marginals: Vec<Vec<Rational>>,
    x: usize,
}

impl MarginalsSpec {
    pub fn new(space: &Arc<ProblemSpace>, marginals: Vec<Vec<Rational>>, x: usize) -> Result<Self> {
        if marginals.len() != space.decisions() {
            return Err(Error::InvalidArgument(format!(
                "{} marginals for {} decisions",
                marginals.len(),
                space.decisions()
            )));
        }
        space.check_covariate(x)?;
        for (k, m) in marginals.iter().enumerate() {
            if m.len() != space.outcome_count() {
                return Err(Error::InvalidArgument(format!(
                    "marginal {k} has {} entries for {} outcomes",
                    m.len(),
                    space.outcome_count()
                )));
            }
            crate::model::check_distribution(m, &format!("marginal {k}"))?;
        }
        Ok(MarginalsSpec {
            space: space.clone(),
            marginals,
            x,
        })
    }

    /// Marginals of a state that is degenerate at one covariate.
    pub fn of_state(state: &State) -> Result<Self> {
        let m = state.marginals();
        let x = m.degenerate_covariate().ok_or_else(|| {
            Error::Precondition("state is not degenerate in the covariate".into())
        })?;
        Self::new(state.space(), m.outcomes, x)
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn marginals(&self) -> &[Vec<Rational>] {
        &self.marginals
    }

    pub fn covariate(&self) -> usize {
        self.x
    }

    pub fn independent_coupling(&self) -> State {
        State::independent(&self.space, &self.marginals, self.x)
            .expect("spec marginals are normalized")
    }
}

/// Linear program over couplings, restricted to the support product.
struct CouplingProgram {
    /// Profile index of each LP variable.
    profiles: Vec<usize>,
    lp: LinearProgram,
}

impl CouplingProgram {
    fn new(spec: &MarginalsSpec, cap: usize) -> Result<Self> {
        let space = &spec.space;
        let supports: Vec<Vec<usize>> = spec
            .marginals
            .iter()
            .map(|m| (0..m.len()).filter(|&a| !m[a].is_zero()).collect())
            .collect();
        let variables = supports
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
            .unwrap_or(usize::MAX);
        if variables > cap {
            return Err(Error::TooManyVariables { variables, cap });
        }
        // Mixed-radix walk over the support product, last decision fastest.
        let profiles = (0..variables)
            .map(|mut i| {
                let mut y = vec![0; supports.len()];
                for (slot, s) in y.iter_mut().zip(&supports).rev() {
                    *slot = s[i % s.len()];
                    i /= s.len();
                }
                space.profile_index(&y)
            })
            .collect::<Vec<_>>();
        let mut lp = LinearProgram::new(profiles.len());
        for (k, support) in supports.iter().enumerate() {
            for &a in support {
                let row = profiles
                    .iter()
                    .map(|&p| {
                        if space.digit(p, k) == a {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                lp.add_equality(row, spec.marginals[k][a].clone());
            }
        }
        Ok(CouplingProgram { profiles, lp })
    }

    fn state(&self, spec: &MarginalsSpec, x: &[Rational]) -> State {
        let space = &spec.space;
        let xs = space.covariate_count();
        let cells = self
            .profiles
            .iter()
            .zip(x)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&p, v)| (p * xs + spec.x, v.clone()))
            .collect();
        State::from_cells(space, cells).expect("simplex vertices are couplings")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub lower: Rational,
    pub upper: Rational,
    pub argmin: State,
    pub argmax: State,
}

impl BoundResult {
    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }
}

/// Bounds of `Σ_y f(y) P(y)` over the identified set, with `f` given per
/// profile index.
pub fn bound_functional(
    spec: &MarginalsSpec,
    f: impl Fn(usize) -> Rational,
) -> Result<BoundResult> {
    bound_functional_capped(spec, f, max_variables())
}

pub fn bound_functional_capped(
    spec: &MarginalsSpec,
    f: impl Fn(usize) -> Rational,
    cap: usize,
) -> Result<BoundResult> {
    let mut program = CouplingProgram::new(spec, cap)?;
    program.lp.objective = program.profiles.iter().map(|&p| f(p)).collect();
    let min = program.lp.solve(Sense::Minimize)?;
    let max = program.lp.solve(Sense::Maximize)?;
    Ok(BoundResult {
        argmin: program.state(spec, &min.x),
        argmax: program.state(spec, &max.x),
        lower: min.value,
        upper: max.value,
    })
}

/// Bounds on `V_P(d; ũ)` over couplings with the given marginals.
pub fn sharp_bounds(spec: &MarginalsSpec, d: usize, utility: &UtilityTable) -> Result<BoundResult> {
    if !same_space(spec.space(), utility.space()) {
        return Err(Error::SpaceMismatch("marginals and utility".into()));
    }
    spec.space.check_decision(d)?;
    bound_functional(spec, |p| utility.at(d, p, spec.x).clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyRanking {
    /// Bounds for each deterministic policy, by decision.
    pub bounds: Vec<BoundResult>,
    /// Decisions whose lower bound beats every rival's upper bound.
    pub dominant: Vec<usize>,
}

impl PolicyRanking {
    pub fn recommendation(&self) -> Option<usize> {
        self.dominant.first().copied()
    }
}

pub fn bound_policy_ranking(spec: &MarginalsSpec, utility: &UtilityTable) -> Result<PolicyRanking> {
    bound_policy_ranking_with(spec, utility, Execution::default())
}

pub fn bound_policy_ranking_with(
    spec: &MarginalsSpec,
    utility: &UtilityTable,
    exec: Execution,
) -> Result<PolicyRanking> {
    let bounds = exec
        .map(spec.space.decisions(), |d| sharp_bounds(spec, d, utility))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let dominant = (0..bounds.len())
        .filter(|&d| (0..bounds.len()).all(|r| r == d || bounds[d].lower > bounds[r].upper))
        .collect();
    Ok(PolicyRanking { bounds, dominant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OutcomeSpace;
    use crate::rational::{int, rat};
    use crate::valuation::decision_value;

    fn rr() -> (MarginalsSpec, UtilityTable) {
        let space =
            ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap();
        let gm = UtilityTable::from_fn(&space, |d, y, _| match (d, y) {
            (0, [1, 0]) => int(1),
            (1, [0, 1]) => rat(1, 2),
            _ => int(0),
        });
        let spec = MarginalsSpec::new(
            &space,
            vec![vec![rat(1, 6), rat(5, 6)], vec![rat(1, 7), rat(6, 7)]],
            0,
        )
        .unwrap();
        (spec, gm)
    }

    #[test]
    fn gm_bounds_match_frechet() {
        let (spec, gm) = rr();
        let b = sharp_bounds(&spec, 1, &gm).unwrap();
        assert_eq!(b.lower, rat(1, 84));
        assert_eq!(b.upper, rat(1, 12));
        for (state, bound) in [(&b.argmin, &b.lower), (&b.argmax, &b.upper)] {
            assert_eq!(&MarginalsSpec::of_state(state).unwrap(), &spec);
            assert_eq!(&decision_value(1, state, &gm).unwrap(), bound);
        }
        let ranking = bound_policy_ranking(&spec, &gm).unwrap();
        assert_eq!(ranking.recommendation(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let (spec, gm) = rr();
        let err = bound_functional_capped(&spec, |p| gm.at(0, p, 0).clone(), 3).unwrap_err();
        assert_eq!(
            err,
            Error::TooManyVariables {
                variables: 4,
                cap: 3
            }
        );
    }

    #[test]
    fn degenerate_marginals_pin_the_coupling() {
        let space =
            ProblemSpace::without_covariates(3, OutcomeSpace::integers(&[0, 1, 2]).unwrap())
                .unwrap();
        let spec = MarginalsSpec::new(
            &space,
            vec![
                vec![int(0), int(1), int(0)],
                vec![rat(1, 2), int(0), rat(1, 2)],
                vec![int(0), int(0), int(1)],
            ],
            0,
        )
        .unwrap();
        let b = bound_functional(&spec, |p| int(p as i64)).unwrap();
        // Profiles (1,0,2) = 11 and (1,2,2) = 17 each carry 1/2.
        assert_eq!(b.lower, int(14));
        assert!(b.is_point());
        assert!(MarginalsSpec::new(&space, vec![vec![int(1), int(0), int(0)]], 0).is_err());
    }
}
