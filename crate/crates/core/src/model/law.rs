use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::policy::Policy;
use super::space::{ensure_same, ProblemSpace};
use super::state::{check_distribution, check_mixture, Marginals, State};
use crate::{Error, Rational, Result};

/// Law on decisions × potential outcomes × covariates.
///
/// Cells are keyed by `(d * M^K + profile) * |X| + x`; zero cells are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    space: Arc<ProblemSpace>,
    mass: BTreeMap<usize, Rational>,
}

/// `P^π(d, y, x) = π(d; y, x) · P(y, x)`.
pub fn induced_law(policy: &Policy, state: &State) -> Result<Law> {
    ensure_same(policy.space(), state.space(), "policy and state")?;
    let space = state.space();
    let cells = space.state_cells();
    let mut mass = BTreeMap::new();
    for (profile, x, p) in state.entries() {
        let row = policy.conditional(profile, x).ok_or_else(|| {
            Error::InvalidPolicy(format!(
                "oracle policy has no entry for {} at covariate {}",
                space.profile_label(profile),
                space.covariates()[x]
            ))
        })?;
        for (d, w) in row.iter().enumerate() {
            if !w.is_zero() {
                let key = d * cells + profile * space.covariate_count() + x;
                mass.insert(key, w * p);
            }
        }
    }
    Law::from_cells(space, mass)
}

impl Law {
    pub fn new(
        space: &Arc<ProblemSpace>,
        entries: impl IntoIterator<Item = (usize, Vec<usize>, usize, Rational)>,
    ) -> Result<Self> {
        let mut mass: BTreeMap<usize, Rational> = BTreeMap::new();
        for (d, y, x, p) in entries {
            space.check_decision(d)?;
            space.check_profile(&y)?;
            space.check_covariate(x)?;
            let key = key(space, d, space.profile_index(&y), x);
            *mass.entry(key).or_insert_with(Rational::zero) += p;
        }
        Self::from_cells(space, mass)
    }

    pub(crate) fn from_cells(
        space: &Arc<ProblemSpace>,
        mut mass: BTreeMap<usize, Rational>,
    ) -> Result<Self> {
        let values: Vec<Rational> = mass.values().cloned().collect();
        check_distribution(&values, "law")?;
        mass.retain(|_, p| !p.is_zero());
        Ok(Law {
            space: space.clone(),
            mass,
        })
    }

    pub fn dirac(space: &Arc<ProblemSpace>, d: usize, y: &[usize], x: usize) -> Result<Self> {
        Self::new(space, [(d, y.to_vec(), x, Rational::one())])
    }

    /// `δ_d · P`: the law of always choosing `d` in state `P`.
    pub fn deterministic(d: usize, state: &State) -> Result<Self> {
        induced_law(&Policy::dirac(state.space(), d)?, state)
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn mass(&self, d: usize, y: &[usize], x: usize) -> Rational {
        let k = key(&self.space, d, self.space.profile_index(y), x);
        self.mass.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero cells as `(d, profile index, covariate, mass)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        let xs = self.space.covariate_count();
        let cells = self.space.state_cells();
        self.mass
            .iter()
            .map(move |(&k, p)| (k / cells, (k % cells) / xs, k % xs, p))
    }

    /// Flat cell index, shared with [`crate::model::UtilityTable`].
    pub(crate) fn raw_entries(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.mass.iter().map(|(&k, p)| (k, p))
    }

    pub fn decision_marginal(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.space.decisions()];
        for (d, _, _, p) in self.entries() {
            out[d] += p;
        }
        out
    }

    /// The decision taken with probability one, if there is one.
    pub fn degenerate_decision(&self) -> Option<usize> {
        self.decision_marginal().iter().position(|m| m.is_one())
    }

    /// Marginal law of `(Y, X)`.
    pub fn state_part(&self) -> State {
        let xs = self.space.covariate_count();
        let mut mass: BTreeMap<usize, Rational> = BTreeMap::new();
        for (_, profile, x, p) in self.entries() {
            *mass.entry(profile * xs + x).or_insert_with(Rational::zero) += p;
        }
        State::from_cells(&self.space, mass).expect("marginal of a law is a state")
    }

    pub fn marginals(&self) -> Marginals {
        self.state_part().marginals()
    }

    pub fn mix(laws: &[Law], weights: &[Rational]) -> Result<Law> {
        let space = check_mixture(laws.iter().map(|l| &l.space), weights)?;
        let mut mass = BTreeMap::new();
        for (law, w) in laws.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            for (&k, p) in &law.mass {
                *mass.entry(k).or_insert_with(Rational::zero) += p * w;
            }
        }
        Self::from_cells(&space, mass)
    }
}

fn key(space: &ProblemSpace, d: usize, profile: usize, x: usize) -> usize {
    (d * space.profile_count() + profile) * space.covariate_count() + x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OutcomeSpace, Policy};
    use crate::rational::{int, rat};

    fn rr() -> (Arc<ProblemSpace>, State) {
        let space =
            ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap();
        let state = State::independent(
            &space,
            &[vec![rat(1, 6), rat(5, 6)], vec![rat(1, 7), rat(6, 7)]],
            0,
        )
        .unwrap();
        (space, state)
    }

    #[test]
    fn dirac_policy_places_the_state_on_one_decision() {
        let (space, state) = rr();
        let law = induced_law(&Policy::dirac(&space, 1).unwrap(), &state).unwrap();
        assert_eq!(law.mass(1, &[0, 1], 0), rat(1, 7));
        assert_eq!(law.mass(1, &[1, 0], 0), rat(5, 42));
        assert_eq!(law.mass(0, &[1, 0], 0), int(0));
        assert_eq!(law.degenerate_decision(), Some(1));
        assert_eq!(law.state_part(), state);
    }

    #[test]
    fn uniform_policy_halves_every_cell() {
        let (space, state) = rr();
        let law = induced_law(&Policy::uniform(&space), &state).unwrap();
        for (profile, x, p) in state.entries() {
            let y = space.profile(profile);
            for d in 0..2 {
                assert_eq!(law.mass(d, &y, x), p / int(2));
            }
        }
        assert_eq!(law.degenerate_decision(), None);
    }

    #[test]
    fn oracle_policy_without_entry_on_support_fails() {
        let (space, state) = rr();
        let partial = Policy::oracle(&space, [(vec![0, 1], 0, vec![int(0), int(1)])]).unwrap();
        assert!(induced_law(&partial, &state).is_err());
        let treat_benefit = Policy::oracle(
            &space,
            (0..space.profile_count())
                .map(|i| space.profile(i))
                .map(|y| {
                    let row = if y == [0, 1] {
                        vec![int(0), int(1)]
                    } else {
                        vec![int(1), int(0)]
                    };
                    (y, 0, row)
                }),
        )
        .unwrap();
        let law = induced_law(&treat_benefit, &state).unwrap();
        assert_eq!(law.decision_marginal(), vec![rat(6, 7), rat(1, 7)]);
    }

    #[test]
    fn mix_checks_weights_and_spaces() {
        let (space, state) = rr();
        let p = Law::deterministic(0, &state).unwrap();
        let q = Law::deterministic(1, &state).unwrap();
        assert_eq!(Law::mix(std::slice::from_ref(&p), &[int(1)]).unwrap(), p);
        assert!(Law::mix(&[p.clone(), q.clone()], &[rat(1, 2), rat(1, 3)]).is_err());
        let other =
            ProblemSpace::without_covariates(3, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap();
        let r = Law::dirac(&other, 0, &[0, 0, 0], 0).unwrap();
        assert!(Law::mix(&[p.clone(), r], &[rat(1, 2), rat(1, 2)]).is_err());
        let pq = Law::mix(&[p.clone(), q.clone()], &[rat(1, 2), rat(1, 2)]).unwrap();
        let qp = Law::mix(&[q, p], &[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(pq, qp);
        assert_eq!(pq, induced_law(&Policy::uniform(&space), &state).unwrap());
    }
}
