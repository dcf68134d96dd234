use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::space::ProblemSpace;
use super::state::check_distribution;
use crate::rational::int;
use crate::{Error, Rational, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    /// Always take decision `d`.
    Dirac(usize),
    /// One distribution over decisions per covariate; ignores outcomes.
    Covariate(Vec<Vec<Rational>>),
    /// Distribution over decisions per `(profile index, covariate)`.
    Oracle(BTreeMap<(usize, usize), Vec<Rational>>),
}

/// Conditional law of the decision given `(y, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Policy {
    space: Arc<ProblemSpace>,
    kind: PolicyKind,
}

impl Policy {
    pub fn dirac(space: &Arc<ProblemSpace>, d: usize) -> Result<Self> {
        space.check_decision(d)?;
        Ok(Policy {
            space: space.clone(),
            kind: PolicyKind::Dirac(d),
        })
    }

    /// Uniform randomization over all decisions, independent of `(y, x)`.
    pub fn uniform(space: &Arc<ProblemSpace>) -> Self {
        let k = space.decisions();
        let row = vec![Rational::one() / int(k as i64); k];
        Policy {
            space: space.clone(),
            kind: PolicyKind::Covariate(vec![row; space.covariate_count()]),
        }
    }

    pub fn covariate(space: &Arc<ProblemSpace>, table: Vec<Vec<Rational>>) -> Result<Self> {
        if table.len() != space.covariate_count() {
            return Err(Error::InvalidPolicy(format!(
                "covariate policy has {} rows for {} covariates",
                table.len(),
                space.covariate_count()
            )));
        }
        for (x, row) in table.iter().enumerate() {
            check_row(space, row, &format!("covariate row {x}"))?;
        }
        Ok(Policy {
            space: space.clone(),
            kind: PolicyKind::Covariate(table),
        })
    }

    /// Oracle policy from `(profile, covariate, distribution)` entries. Cells
    /// without an entry may only be used where the state has no mass.
    pub fn oracle(
        space: &Arc<ProblemSpace>,
        entries: impl IntoIterator<Item = (Vec<usize>, usize, Vec<Rational>)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (y, x, row) in entries {
            space.check_profile(&y)?;
            space.check_covariate(x)?;
            check_row(space, &row, &format!("oracle entry {y:?}"))?;
            if table.insert((space.profile_index(&y), x), row).is_some() {
                return Err(Error::InvalidPolicy(format!(
                    "duplicate oracle entry {y:?}"
                )));
            }
        }
        Ok(Policy {
            space: space.clone(),
            kind: PolicyKind::Oracle(table),
        })
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn kind(&self) -> &PolicyKind {
        &self.kind
    }

    /// `π(· ; y, x)`, or `None` for an oracle cell without an entry.
    pub fn conditional(&self, profile: usize, x: usize) -> Option<Cow<'_, [Rational]>> {
        match &self.kind {
            PolicyKind::Dirac(d) => {
                let mut row = vec![Rational::zero(); self.space.decisions()];
                row[*d] = Rational::one();
                Some(Cow::Owned(row))
            }
            PolicyKind::Covariate(table) => Some(Cow::Borrowed(&table[x])),
            PolicyKind::Oracle(table) => table.get(&(profile, x)).map(|r| Cow::Borrowed(&r[..])),
        }
    }
}

fn check_row(space: &ProblemSpace, row: &[Rational], what: &str) -> Result<()> {
    if row.len() != space.decisions() {
        return Err(Error::InvalidPolicy(format!(
            "{what} has {} entries for {} decisions",
            row.len(),
            space.decisions()
        )));
    }
    check_distribution(row, what).map_err(|e| Error::InvalidPolicy(e.to_string()))
}
