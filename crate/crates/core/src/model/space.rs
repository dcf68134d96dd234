use std::collections::HashSet;
use std::sync::Arc;

use crate::rational::format_rational;
use crate::{Error, Rational, Result};

/// Label of the covariate used when a problem has none.
pub const DEFAULT_COVARIATE: &str = "-";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeSpace {
    labels: Vec<String>,
    values: Vec<Rational>,
}

impl OutcomeSpace {
    pub fn new(labels: Vec<String>, values: Vec<Rational>) -> Result<Self> {
        if labels.len() != values.len() {
            return Err(Error::InvalidSpace(format!(
                "{} labels but {} values",
                labels.len(),
                values.len()
            )));
        }
        if labels.len() < 2 {
            return Err(Error::InvalidSpace("need at least two outcomes".into()));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidSpace(format!(
                    "duplicate outcome label {label:?}"
                )));
            }
        }
        Ok(OutcomeSpace { labels, values })
    }

    /// Outcomes labelled by their own value.
    pub fn numeric(values: Vec<Rational>) -> Result<Self> {
        let labels = values.iter().map(format_rational).collect();
        Self::new(labels, values)
    }

    pub fn integers(values: &[i64]) -> Result<Self> {
        Self::numeric(values.iter().map(|&v| crate::rational::int(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Index of an outcome with the given numeric value.
    pub fn index_of_value(&self, value: &Rational) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }

    /// Index of the smallest value; the first one on ties.
    pub fn min_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if v < &self.values[best] {
                best = i;
            }
        }
        best
    }
}

/// Decisions `0..K`, an outcome space and a finite covariate space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpace {
    decisions: usize,
    outcomes: OutcomeSpace,
    covariates: Vec<String>,
    profiles: usize,
}

impl ProblemSpace {
    pub fn new(
        decisions: usize,
        outcomes: OutcomeSpace,
        covariates: Vec<String>,
    ) -> Result<Arc<Self>> {
        if decisions < 2 {
            return Err(Error::InvalidSpace(format!(
                "need at least two decisions, got {decisions}"
            )));
        }
        if covariates.is_empty() {
            return Err(Error::InvalidSpace("covariate space is empty".into()));
        }
        let mut seen = HashSet::new();
        for label in &covariates {
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidSpace(format!(
                    "duplicate covariate label {label:?}"
                )));
            }
        }
        let profiles = u32::try_from(decisions)
            .ok()
            .and_then(|k| outcomes.len().checked_pow(k))
            .and_then(|p| p.checked_mul(covariates.len() * decisions).map(|_| p))
            .ok_or_else(|| {
                Error::InvalidSpace(format!(
                    "{}^{} potential-outcome profiles overflow",
                    outcomes.len(),
                    decisions
                ))
            })?;
        Ok(Arc::new(ProblemSpace {
            decisions,
            outcomes,
            covariates,
            profiles,
        }))
    }

    /// Space with the singleton covariate [`DEFAULT_COVARIATE`].
    pub fn without_covariates(decisions: usize, outcomes: OutcomeSpace) -> Result<Arc<Self>> {
        Self::new(decisions, outcomes, vec![DEFAULT_COVARIATE.to_string()])
    }

    pub fn decisions(&self) -> usize {
        self.decisions
    }

    pub fn outcomes(&self) -> &OutcomeSpace {
        &self.outcomes
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes.len()
    }

    pub fn covariates(&self) -> &[String] {
        &self.covariates
    }

    pub fn covariate_count(&self) -> usize {
        self.covariates.len()
    }

    pub fn covariate_index(&self, label: &str) -> Option<usize> {
        self.covariates.iter().position(|c| c == label)
    }

    /// `M^K`.
    pub fn profile_count(&self) -> usize {
        self.profiles
    }

    /// Number of `(y, x)` cells of a state.
    pub fn state_cells(&self) -> usize {
        self.profiles * self.covariates.len()
    }

    /// Number of `(d, y, x)` cells of a law or utility table.
    pub fn law_cells(&self) -> usize {
        self.state_cells() * self.decisions
    }

    /// Outcome indices of the profile with the given lexicographic index.
    pub fn profile(&self, mut index: usize) -> Vec<usize> {
        let m = self.outcomes.len();
        let mut y = vec![0; self.decisions];
        for slot in y.iter_mut().rev() {
            *slot = index % m;
            index /= m;
        }
        y
    }

    pub fn profile_index(&self, y: &[usize]) -> usize {
        let m = self.outcomes.len();
        y.iter().fold(0, |acc, &v| acc * m + v)
    }

    pub fn check_profile(&self, y: &[usize]) -> Result<()> {
        if y.len() != self.decisions || y.iter().any(|&v| v >= self.outcomes.len()) {
            return Err(Error::InvalidArgument(format!(
                "profile {y:?} is not in a space with {} decisions and {} outcomes",
                self.decisions,
                self.outcomes.len()
            )));
        }
        Ok(())
    }

    pub fn check_covariate(&self, x: usize) -> Result<()> {
        if x >= self.covariates.len() {
            return Err(Error::InvalidArgument(format!(
                "covariate index {x} out of range"
            )));
        }
        Ok(())
    }

    pub fn check_decision(&self, d: usize) -> Result<()> {
        if d >= self.decisions {
            return Err(Error::InvalidArgument(format!(
                "decision {d} out of range for K = {}",
                self.decisions
            )));
        }
        Ok(())
    }

    /// Outcome digit of decision `k` inside a profile index.
    pub fn digit(&self, profile: usize, k: usize) -> usize {
        let m = self.outcomes.len();
        let shift = self.decisions - 1 - k;
        (profile / m.pow(shift as u32)) % m
    }

    /// Profile index after replacing the digit of decision `k` with `value`.
    pub fn with_digit(&self, profile: usize, k: usize, value: usize) -> usize {
        let m = self.outcomes.len();
        let place = m.pow((self.decisions - 1 - k) as u32);
        let current = (profile / place) % m;
        profile - current * place + value * place
    }

    /// Renders a profile with outcome labels, e.g. `(0,1)`.
    pub fn profile_label(&self, profile: usize) -> String {
        let y = self.profile(profile);
        let parts: Vec<&str> = y.iter().map(|&v| self.outcomes.label(v)).collect();
        format!("({})", parts.join(","))
    }
}

pub fn same_space(a: &Arc<ProblemSpace>, b: &Arc<ProblemSpace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn ensure_same(a: &Arc<ProblemSpace>, b: &Arc<ProblemSpace>, what: &str) -> Result<()> {
    if same_space(a, b) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch(what.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(k: usize) -> Arc<ProblemSpace> {
        ProblemSpace::without_covariates(k, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap()
    }

    #[test]
    fn profiles_enumerate_lexicographically() {
        let s = ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1, 2]).unwrap())
            .unwrap();
        assert_eq!(s.profile_count(), 9);
        assert_eq!(s.profile(0), vec![0, 0]);
        assert_eq!(s.profile(1), vec![0, 1]);
        assert_eq!(s.profile(3), vec![1, 0]);
        for i in 0..9 {
            assert_eq!(s.profile_index(&s.profile(i)), i);
            assert_eq!(s.digit(i, 0), s.profile(i)[0]);
            assert_eq!(s.digit(i, 1), s.profile(i)[1]);
        }
        assert_eq!(
            s.with_digit(s.profile_index(&[2, 1]), 0, 0),
            s.profile_index(&[0, 1])
        );
    }

    #[test]
    fn rejects_degenerate_spaces() {
        let ys = OutcomeSpace::integers(&[0, 1]).unwrap();
        assert!(ProblemSpace::without_covariates(1, ys.clone()).is_err());
        assert!(ProblemSpace::new(2, ys.clone(), vec![]).is_err());
        assert!(ProblemSpace::new(2, ys, vec!["a".into(), "a".into()]).is_err());
        assert!(OutcomeSpace::integers(&[3]).is_err());
        assert!(OutcomeSpace::integers(&[1, 1]).is_err());
    }

    #[test]
    fn equal_spaces_compare_equal() {
        assert!(same_space(&binary(2), &binary(2)));
        assert!(!same_space(&binary(2), &binary(3)));
        assert_eq!(binary(2).profile_label(2), "(1,0)");
    }
}
