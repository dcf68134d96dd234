use std::sync::Arc;

use num_traits::Zero;

use super::space::ProblemSpace;
use crate::{Error, Rational, Result};

/// Total map `(d, y, x) -> value` stored densely in law-cell order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtilityTable {
    space: Arc<ProblemSpace>,
    values: Vec<Rational>,
}

impl UtilityTable {
    pub fn zero(space: &Arc<ProblemSpace>) -> Self {
        UtilityTable {
            space: space.clone(),
            values: vec![Rational::zero(); space.law_cells()],
        }
    }

    /// Tabulates `f(d, y, x)` over every cell, with `y` as outcome indices.
    pub fn from_fn(
        space: &Arc<ProblemSpace>,
        mut f: impl FnMut(usize, &[usize], usize) -> Rational,
    ) -> Self {
        let mut values = Vec::with_capacity(space.law_cells());
        for d in 0..space.decisions() {
            for profile in 0..space.profile_count() {
                let y = space.profile(profile);
                for x in 0..space.covariate_count() {
                    values.push(f(d, &y, x));
                }
            }
        }
        UtilityTable {
            space: space.clone(),
            values,
        }
    }

    /// Like [`UtilityTable::from_fn`] but hands `f` the numeric outcome values.
    pub fn from_values_fn(
        space: &Arc<ProblemSpace>,
        mut f: impl FnMut(usize, &[Rational]) -> Rational,
    ) -> Self {
        let outcomes = space.outcomes().clone();
        Self::from_fn(space, |d, y, _| {
            let v: Vec<Rational> = y.iter().map(|&i| outcomes.value(i).clone()).collect();
            f(d, &v)
        })
    }

    /// Fallible variant of [`UtilityTable::from_fn`].
    pub fn try_from_fn(
        space: &Arc<ProblemSpace>,
        mut f: impl FnMut(usize, &[usize], usize) -> Result<Rational>,
    ) -> Result<Self> {
        let mut err = None;
        let table = Self::from_fn(space, |d, y, x| match f(d, y, x) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                Rational::zero()
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(table),
        }
    }

    /// Builds a table from `(d, y, x, value)` entries that must cover every
    /// cell exactly once.
    pub fn from_entries(
        space: &Arc<ProblemSpace>,
        entries: impl IntoIterator<Item = (usize, Vec<usize>, usize, Rational)>,
    ) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; space.law_cells()];
        for (d, y, x, v) in entries {
            space.check_decision(d)?;
            space.check_profile(&y)?;
            space.check_covariate(x)?;
            let key = cell(space, d, space.profile_index(&y), x);
            if values[key].replace(v).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "utility cell d={d} y={} listed twice",
                    space.profile_label(space.profile_index(&y))
                )));
            }
        }
        let mut out = Vec::with_capacity(values.len());
        for (key, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => out.push(v),
                None => {
                    let (d, profile, x) = split(space, key);
                    return Err(Error::InvalidArgument(format!(
                        "utility is missing cell d={d} y={} x={}",
                        space.profile_label(profile),
                        space.covariates()[x]
                    )));
                }
            }
        }
        Ok(UtilityTable {
            space: space.clone(),
            values: out,
        })
    }

    pub fn space(&self) -> &Arc<ProblemSpace> {
        &self.space
    }

    pub fn get(&self, d: usize, y: &[usize], x: usize) -> &Rational {
        self.at(d, self.space.profile_index(y), x)
    }

    /// Value at a profile index rather than an outcome vector.
    pub fn at(&self, d: usize, profile: usize, x: usize) -> &Rational {
        &self.values[cell(&self.space, d, profile, x)]
    }

    pub(crate) fn raw(&self, key: usize) -> &Rational {
        &self.values[key]
    }

    pub fn map(&self, mut f: impl FnMut(&Rational) -> Rational) -> Self {
        UtilityTable {
            space: self.space.clone(),
            values: self.values.iter().map(&mut f).collect(),
        }
    }

    /// Every cell as `(d, profile index, covariate, value)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> + '_ {
        self.values.iter().enumerate().map(move |(key, v)| {
            let (d, profile, x) = split(&self.space, key);
            (d, profile, x, v)
        })
    }
}

fn cell(space: &ProblemSpace, d: usize, profile: usize, x: usize) -> usize {
    (d * space.profile_count() + profile) * space.covariate_count() + x
}

fn split(space: &ProblemSpace, key: usize) -> (usize, usize, usize) {
    let xs = space.covariate_count();
    let cells = space.state_cells();
    (key / cells, (key % cells) / xs, key % xs)
}
