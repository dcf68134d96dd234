//! Named worked examples, scenario files, and the command runner behind the
//! `cfdt` binary.

mod builtin;
mod file;
mod report;
mod run;

pub use builtin::{builtin, builtin_names};
pub use file::{load, parse_scenario, serialize_scenario};
pub use report::{render, Check, Format, Report, Row, Value};
pub use run::{run, run_with, Command, RunOptions};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::model::{Policy, ProblemSpace, State, UtilityTable};
use crate::projection::{LotterySet, Menu};
use crate::valuation::bell_utility;
use crate::{Error, Rational, Result};

/// Name of the utility generated from [`Scenario::lambda`].
pub const BELL_UTILITY: &str = "bell";

/// An expected result, compared against the report row of the same key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Exact(Rational),
    Approx {
        value: Rational,
        tolerance: Rational,
    },
    Interval(Rational, Rational),
    Flag(bool),
    Text(String),
}

/// One instance of the independence axiom on deterministic laws
/// `δ_d × state`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceSpec {
    pub decision: usize,
    pub p: String,
    pub q: String,
    pub r: String,
    pub alpha: Rational,
}

/// Independence on lotteries inside a context, positions relative to the
/// context's items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextIndependence {
    pub utility: String,
    pub left: usize,
    pub right: usize,
    pub common: usize,
    pub alpha: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextSetup {
    pub name: String,
    pub items: Menu,
    /// Utilities on one coordinate per context item.
    pub utilities: BTreeMap<String, UtilityTable>,
    pub independence: Option<ContextIndependence>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionSetup {
    pub lotteries: LotterySet,
    /// Two-item menus without an explicit utility use the strict-win
    /// indicator under the independent coupling.
    pub pairwise_win: bool,
    pub menus: Vec<(Menu, UtilityTable)>,
    pub contexts: Vec<ContextSetup>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub space: Arc<ProblemSpace>,
    /// Display labels for decisions; indices when empty.
    pub decision_labels: Vec<String>,
    pub states: BTreeMap<String, State>,
    pub utilities: BTreeMap<String, UtilityTable>,
    pub policies: BTreeMap<String, Policy>,
    /// Regret parameter of the generated [`BELL_UTILITY`], as written.
    pub lambda: Option<String>,
    /// Ordered decision pairs whose signed win functional is bounded.
    pub comparisons: Vec<(usize, usize)>,
    pub independence: Option<IndependenceSpec>,
    pub projection: Option<ProjectionSetup>,
    /// Keys are `command.row-key`.
    pub expected: BTreeMap<String, Expected>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, space: Arc<ProblemSpace>) -> Self {
        Scenario {
            name: name.into(),
            space,
            decision_labels: Vec::new(),
            states: BTreeMap::new(),
            utilities: BTreeMap::new(),
            policies: BTreeMap::new(),
            lambda: None,
            comparisons: Vec::new(),
            independence: None,
            projection: None,
            expected: BTreeMap::new(),
        }
    }

    pub fn decision_label(&self, d: usize) -> String {
        self.decision_labels
            .get(d)
            .cloned()
            .unwrap_or_else(|| d.to_string())
    }

    /// Sets `lambda` and regenerates the regret utility.
    pub fn set_lambda(&mut self, lambda: &str) -> Result<()> {
        let value: f64 = lambda.trim().parse().map_err(|_| Error::Parse {
            what: "lambda",
            input: lambda.to_string(),
        })?;
        let table = bell_utility(&self.space, value)?;
        self.utilities.insert(BELL_UTILITY.to_string(), table);
        self.lambda = Some(lambda.trim().to_string());
        Ok(())
    }

    pub fn expect(&mut self, key: &str, value: Expected) {
        self.expected.insert(key.to_string(), value);
    }

    /// Checks cross references; called after parsing and on builtins.
    pub fn validate(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(Error::Scenario("scenario has no state".into()));
        }
        if !self.decision_labels.is_empty() && self.decision_labels.len() != self.space.decisions()
        {
            return Err(Error::Scenario("one decision label per decision".into()));
        }
        for key in self.expected.keys() {
            let known = key.split_once('.').is_some_and(|(c, rest)| {
                !rest.is_empty() && Command::ALL.iter().any(|k| k.name() == c)
            });
            if !known {
                return Err(Error::Scenario(format!(
                    "expected key {key:?} must start with a command name and a dot"
                )));
            }
        }
        for (i, j) in &self.comparisons {
            self.space.check_decision(*i)?;
            self.space.check_decision(*j)?;
        }
        if let Some(ind) = &self.independence {
            self.space.check_decision(ind.decision)?;
            for name in [&ind.p, &ind.q, &ind.r] {
                if !self.states.contains_key(name) {
                    return Err(Error::Scenario(format!(
                        "independence refers to unknown state {name:?}"
                    )));
                }
            }
        }
        if let Some(p) = &self.projection {
            for c in &p.contexts {
                if let Some(ind) = &c.independence {
                    if !c.utilities.contains_key(&ind.utility) {
                        return Err(Error::Scenario(format!(
                            "context {} refers to unknown utility {:?}",
                            c.name, ind.utility
                        )));
                    }
                    if [ind.left, ind.right, ind.common]
                        .iter()
                        .any(|&i| i >= c.items.len())
                    {
                        return Err(Error::Scenario(format!(
                            "context {} independence out of range",
                            c.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
