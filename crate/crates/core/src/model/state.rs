use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::space::ProblemSpace;
use crate::rational::format_rational;
use crate::{Error, Rational, Result};

/// Joint law of the potential-outcome vector and covariates.
///
/// Cells are keyed by `profile * |X| + x`; zero cells are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    space: Arc<ProblemSpace>,
    mass: BTreeMap<usize, Rational>,
}

/// Per-decision outcome marginals plus the covariate marginal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marginals {
    pub outcomes: Vec<Vec<Rational>>,
    pub covariates: Vec<Rational>,
}

impl Marginals {
    pub fn of_decision(&self, k: usize) -> &[Rational] {
        &self.outcomes[k]
    }

    /// Covariate index carrying all the mass, if any.
    pub fn degenerate_covariate(&self) -> Option<usize> {
        self.covariates.iter().position(|m| m.is_one())
    }
}

pub(crate) fn check_distribution(masses: &[Rational], what: &str) -> Result<()> {
    if let Some(m) = masses.iter().find(|m| m.is_negative()) {
        return Err(Error::InvalidDistribution(format!(
            "{what} has negative mass {}",
            format_rational(m)
        )));
    }
    let total: Rational = masses.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {} instead of 1",
            format_rational(&total)
        )));
    }
    Ok(())
}

impl State {
    /// Builds a state from `(profile, covariate, mass)` entries. Repeated cells
    /// accumulate.
    pub fn new(
        space: &Arc<ProblemSpace>,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Rational)>,
    ) -> Result<Self> {
        let mut mass: BTreeMap<usize, Rational> = BTreeMap::new();
        for (y, x, p) in entries {
            space.check_profile(&y)?;
            space.check_covariate(x)?;
            let key = space.profile_index(&y) * space.covariate_count() + x;
            *mass.entry(key).or_insert_with(Rational::zero) += p;
        }
        Self::from_cells(space, mass)
    }

    pub(crate) fn from_cells(
        space: &Arc<ProblemSpace>,
        mut mass: BTreeMap<usize, Rational>,
    ) -> Result<Self> {
        let values: Vec<Rational> = mass.values().cloned().collect();
        check_distribution(&values, "state")?;
        mass.retain(|_, p| !p.is_zero());
        Ok(State {
            space: space.clone(),
            mass,
        })
    }

    pub fn dirac(space: &Arc<ProblemSpace>, y: &[usize], x: usize) -> Result<Self> {
        Self::new(space, [(y.to_vec(), x, Rational::one())])
    }

    /// Product of per-decision marginals, degenerate at covariate `x`.
    pub fn independent(
        space: &Arc<ProblemSpace>,
        marginals: &[Vec<Rational>],
        x: usize,
    ) -> Result<Self> {
        if marginals.len() != space.decisions() {
            return Err(Error::InvalidArgument(format!(
                "{} marginals for {} decisions",
                marginals.len(),
                space.decisions()
            )));
        }
        for (k, m) in marginals.iter().enumerate() {
            if m.len() != space.outcome_count() {
                return Err(Error::InvalidArgument(format!(
                    "marginal {k} has {} entries for {} outcomes",
                    m.len(),
                    space.outcome_count()
                )));
            }
            check_distribution(m, &format!("marginal of Y({k})"))?;
        }
        space.check_covariate(x)?;
        let x_count = space.covariate_count();
        let mut mass = BTreeMap::new();
        // Only walk the support of each marginal.
        let supports: Vec<Vec<usize>> = marginals
            .iter()
            .map(|m| (0..m.len()).filter(|&i| !m[i].is_zero()).collect())
            .collect();
        let mut cursor = vec![0usize; supports.len()];
        loop {
            let y: Vec<usize> = cursor.iter().zip(&supports).map(|(&c, s)| s[c]).collect();
            let p: Rational = y
                .iter()
                .enumerate()
                .map(|(k, &v)| marginals[k][v].clone())
                .product();
            mass.insert(space.profile_index(&y) * x_count + x, p);
            let mut k = supports.len();
            loop {
                if k == 0 {
                    return Self::from_cells(space, mass);
                }
                k -= 1;
                cursor[k] += 1;
                if cursor[k] < supports[k].len() {
                    break;
                }
                cursor[k] = 0;
            }
        }
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn mass(&self, y: &[usize], x: usize) -> Rational {
        let key = self.space.profile_index(y) * self.space.covariate_count() + x;
        self.mass.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero cells as `(profile index, covariate, mass)` in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let xs = self.space.covariate_count();
        self.mass
            .iter()
            .map(move |(&key, p)| (key / xs, key % xs, p))
    }

    pub fn support_len(&self) -> usize {
        self.mass.len()
    }

    pub fn marginals(&self) -> Marginals {
        let space = &self.space;
        let mut outcomes = vec![vec![Rational::zero(); space.outcome_count()]; space.decisions()];
        let mut covariates = vec![Rational::zero(); space.covariate_count()];
        for (profile, x, p) in self.entries() {
            for (k, row) in outcomes.iter_mut().enumerate() {
                row[space.digit(profile, k)] += p;
            }
            covariates[x] += p;
        }
        Marginals {
            outcomes,
            covariates,
        }
    }

    /// Per-decision means of the numeric outcome values.
    pub fn means(&self) -> Vec<Rational> {
        let space = &self.space;
        let mut means = vec![Rational::zero(); space.decisions()];
        for (profile, _, p) in self.entries() {
            for (k, mean) in means.iter_mut().enumerate() {
                *mean += space.outcomes().value(space.digit(profile, k)) * p;
            }
        }
        means
    }

    /// Pointwise convex combination of states on a shared space.
    pub fn mix(states: &[State], weights: &[Rational]) -> Result<State> {
        let space = check_mixture(states.iter().map(|s| &s.space), weights)?;
        let mut mass = BTreeMap::new();
        for (s, w) in states.iter().zip(weights) {
            for (&key, p) in &s.mass {
                *mass.entry(key).or_insert_with(Rational::zero) += p * w;
            }
        }
        Self::from_cells(&space, mass)
    }
}

pub(crate) fn check_mixture<'a>(
    mut spaces: impl Iterator<Item = &'a Arc<ProblemSpace>>,
    weights: &[Rational],
) -> Result<Arc<ProblemSpace>> {
    let first = spaces
        .next()
        .ok_or_else(|| Error::InvalidArgument("mixture of nothing".into()))?
        .clone();
    let mut count = 1;
    for s in spaces {
        super::space::ensure_same(&first, s, "mixture components")?;
        count += 1;
    }
    if count != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{count} components but {} weights",
            weights.len()
        )));
    }
    check_distribution(weights, "mixture weights")?;
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OutcomeSpace;
    use crate::rational::rat;

    fn rr_space() -> Arc<ProblemSpace> {
        ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap()
    }

    #[test]
    fn independent_coupling_matches_hand_products() {
        let s = State::independent(
            &rr_space(),
            &[vec![rat(1, 6), rat(5, 6)], vec![rat(1, 7), rat(6, 7)]],
            0,
        )
        .unwrap();
        assert_eq!(s.mass(&[1, 0], 0), rat(5, 42));
        assert_eq!(s.mass(&[0, 1], 0), rat(1, 7));
        assert_eq!(s.mass(&[0, 0], 0), rat(1, 42));
        assert_eq!(s.mass(&[1, 1], 0), rat(5, 7));
        let m = s.marginals();
        assert_eq!(m.outcomes[0], vec![rat(1, 6), rat(5, 6)]);
        assert_eq!(s.means(), vec![rat(5, 6), rat(6, 7)]);
    }

    #[test]
    fn point_mass_marginals_give_a_dirac() {
        let space = rr_space();
        let s = State::independent(
            &space,
            &[vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]],
            0,
        )
        .unwrap();
        assert_eq!(s, State::dirac(&space, &[1, 0], 0).unwrap());
        assert_eq!(s.support_len(), 1);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let space = rr_space();
        assert!(State::new(&space, [(vec![0, 0], 0, rat(1, 2))]).is_err());
        assert!(State::new(
            &space,
            [(vec![0, 0], 0, rat(3, 2)), (vec![0, 1], 0, rat(-1, 2))]
        )
        .is_err());
        assert!(State::independent(
            &space,
            &[vec![rat(1, 2), rat(1, 3)], vec![rat(1, 1), rat(0, 1)]],
            0
        )
        .is_err());
        assert!(State::dirac(&space, &[0, 2], 0).is_err());
    }
}
