use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    ContextIndependence, ContextSetup, Expected, IndependenceSpec, ProjectionSetup, Scenario,
    BELL_UTILITY,
};
use crate::model::{OutcomeSpace, Policy, PolicyKind, ProblemSpace};
use crate::projection::{LotterySet, Menu};
use crate::wire::{
    exact, resolve_covariate, state_entries, state_from_entries, utility_entries,
    utility_from_entries, Exact, StateEntry, UtilityEntry,
};
use crate::{Error, Result};

/// Key of the state, utility or policy written in the singular fields.
const DEFAULT_NAME: &str = "default";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    decisions: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    decision_labels: Vec<String>,
    outcomes: Vec<OutcomeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    covariates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    state: Option<Vec<StateEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    states: BTreeMap<String, Vec<StateEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    utility: Option<Vec<UtilityEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    utilities: BTreeMap<String, Vec<UtilityEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    policy: Option<PolicyEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    policies: BTreeMap<String, PolicyEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    comparisons: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    independence: Option<IndependenceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    projection: Option<ProjectionEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    expected: BTreeMap<String, ExpectedEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutcomeEntry {
    label: String,
    value: Exact,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum PolicyEntry {
    Dirac {
        d: usize,
    },
    /// One decision distribution per covariate label.
    Covariate {
        table: BTreeMap<String, Vec<Exact>>,
    },
    Oracle {
        table: Vec<OracleRow>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleRow {
    y: Vec<String>,
    #[serde(default = "default_x")]
    x: String,
    probs: Vec<Exact>,
}

fn default_x() -> String {
    crate::model::DEFAULT_COVARIATE.to_string()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndependenceEntry {
    decision: usize,
    p: String,
    q: String,
    r: String,
    alpha: Exact,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectionEntry {
    lotteries: Vec<LotteryEntry>,
    #[serde(default)]
    pairwise_win: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    menus: Vec<MenuEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    contexts: Vec<ContextEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LotteryEntry {
    label: String,
    probs: Vec<Exact>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MenuEntry {
    items: Vec<String>,
    utility: Vec<UtilityEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextEntry {
    name: String,
    items: Vec<String>,
    utilities: BTreeMap<String, Vec<UtilityEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    independence: Option<ContextIndependenceEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextIndependenceEntry {
    utility: String,
    left: String,
    right: String,
    common: String,
    alpha: Exact,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ExpectedEntry {
    Flag(bool),
    Exact(Exact),
    Text { text: String },
    Approx { approx: Exact, tolerance: Exact },
    Interval { lower: Exact, upper: Exact },
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    from_file(file)
}

/// Reads a scenario from a JSON file.
pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario(&text)
}

pub fn serialize_scenario(scenario: &Scenario) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_file(scenario))?)
}

fn named<T>(
    single: Option<T>,
    mut many: BTreeMap<String, T>,
    what: &str,
) -> Result<BTreeMap<String, T>> {
    if let Some(v) = single {
        if many.insert(DEFAULT_NAME.to_string(), v).is_some() {
            return Err(Error::Scenario(format!(
                "{what} {DEFAULT_NAME:?} given twice"
            )));
        }
    }
    Ok(many)
}

fn from_file(mut f: ScenarioFile) -> Result<Scenario> {
    let outcomes = OutcomeSpace::new(
        f.outcomes.iter().map(|o| o.label.clone()).collect(),
        f.outcomes.iter().map(|o| o.value.0.clone()).collect(),
    )?;
    let space = match f.covariates.take() {
        Some(xs) => ProblemSpace::new(f.decisions, outcomes.clone(), xs)?,
        None => ProblemSpace::without_covariates(f.decisions, outcomes.clone())?,
    };
    let mut s = Scenario::new(
        f.name.take().unwrap_or_else(|| "scenario".into()),
        space.clone(),
    );
    s.decision_labels = f.decision_labels;

    for (name, entries) in named(f.state.take(), std::mem::take(&mut f.states), "state")? {
        let state = state_from_entries(&space, &entries)
            .map_err(|e| Error::Scenario(format!("state {name}: {e}")))?;
        s.states.insert(name, state);
    }
    for (name, entries) in named(
        f.utility.take(),
        std::mem::take(&mut f.utilities),
        "utility",
    )? {
        if name == BELL_UTILITY && f.lambda.is_some() {
            return Err(Error::Scenario(
                "utility \"bell\" is generated from lambda".into(),
            ));
        }
        let table = utility_from_entries(&space, &entries)
            .map_err(|e| Error::Scenario(format!("utility {name}: {e}")))?;
        s.utilities.insert(name, table);
    }
    for (name, entry) in named(f.policy.take(), std::mem::take(&mut f.policies), "policy")? {
        s.policies.insert(name, policy_from_entry(&space, entry)?);
    }
    if let Some(lambda) = f.lambda.take() {
        s.set_lambda(&lambda)?;
    }
    s.comparisons = f.comparisons.iter().map(|[i, j]| (*i, *j)).collect();
    s.independence = f.independence.take().map(|e| IndependenceSpec {
        decision: e.decision,
        p: e.p,
        q: e.q,
        r: e.r,
        alpha: e.alpha.0,
    });
    if let Some(p) = f.projection.take() {
        s.projection = Some(projection_from_entry(&outcomes, p)?);
    }
    for (key, e) in f.expected {
        let value = match e {
            ExpectedEntry::Flag(b) => Expected::Flag(b),
            ExpectedEntry::Exact(v) => Expected::Exact(v.0),
            ExpectedEntry::Text { text } => Expected::Text(text),
            ExpectedEntry::Approx { approx, tolerance } => Expected::Approx {
                value: approx.0,
                tolerance: tolerance.0,
            },
            ExpectedEntry::Interval { lower, upper } => Expected::Interval(lower.0, upper.0),
        };
        s.expected.insert(key, value);
    }
    s.validate()?;
    Ok(s)
}

fn policy_from_entry(space: &Arc<ProblemSpace>, entry: PolicyEntry) -> Result<Policy> {
    match entry {
        PolicyEntry::Dirac { d } => Policy::dirac(space, d),
        PolicyEntry::Covariate { table } => {
            let mut rows = vec![None; space.covariate_count()];
            for (label, row) in table {
                let x = resolve_covariate(space, &label)?;
                rows[x] = Some(row.into_iter().map(|v| v.0).collect());
            }
            let rows = rows
                .into_iter()
                .enumerate()
                .map(|(x, r)| {
                    r.ok_or_else(|| {
                        Error::Scenario(format!("policy has no row for {}", space.covariates()[x]))
                    })
                })
                .collect::<Result<_>>()?;
            Policy::covariate(space, rows)
        }
        PolicyEntry::Oracle { table } => {
            let entries = table
                .into_iter()
                .map(|row| {
                    let y = row
                        .y
                        .iter()
                        .map(|l| {
                            space.outcomes().index_of(l).ok_or_else(|| {
                                Error::Scenario(format!("unknown outcome label {l:?}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok((
                        y,
                        resolve_covariate(space, &row.x)?,
                        row.probs.into_iter().map(|v| v.0).collect(),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            Policy::oracle(space, entries)
        }
    }
}

fn menu_of(set: &LotterySet, labels: &[String]) -> Result<Menu> {
    let items = labels
        .iter()
        .map(|l| {
            set.index_of(l)
                .ok_or_else(|| Error::Scenario(format!("unknown lottery {l:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let menu = Menu::new(items.clone())?;
    if menu.items() != items.as_slice() {
        return Err(Error::Scenario(format!(
            "menu items {labels:?} must follow lottery order"
        )));
    }
    Ok(menu)
}

fn menu_labels(set: &LotterySet, menu: &Menu) -> Vec<String> {
    menu.items()
        .iter()
        .map(|&i| set.label(i).to_string())
        .collect()
}

fn projection_from_entry(outcomes: &OutcomeSpace, p: ProjectionEntry) -> Result<ProjectionSetup> {
    let set = LotterySet::new(
        outcomes.clone(),
        p.lotteries
            .into_iter()
            .map(|l| (l.label, l.probs.into_iter().map(|v| v.0).collect()))
            .collect(),
    )?;
    let mut menus = Vec::new();
    for m in p.menus {
        let menu = menu_of(&set, &m.items)?;
        let utility = utility_from_entries(&set.space_for(&menu)?, &m.utility)?;
        menus.push((menu, utility));
    }
    let mut contexts = Vec::new();
    for c in p.contexts {
        let items = menu_of(&set, &c.items)?;
        let space = set.space_for(&items)?;
        let utilities = c
            .utilities
            .iter()
            .map(|(k, v)| Ok((k.clone(), utility_from_entries(&space, v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let position = |label: &str| {
            c.items
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Scenario(format!("{label:?} is not in context {}", c.name)))
        };
        let independence = c
            .independence
            .map(|i| {
                Ok::<_, Error>(ContextIndependence {
                    left: position(&i.left)?,
                    right: position(&i.right)?,
                    common: position(&i.common)?,
                    utility: i.utility,
                    alpha: i.alpha.0,
                })
            })
            .transpose()?;
        contexts.push(ContextSetup {
            name: c.name,
            items,
            utilities,
            independence,
        });
    }
    Ok(ProjectionSetup {
        lotteries: set,
        pairwise_win: p.pairwise_win,
        menus,
        contexts,
    })
}

fn to_file(s: &Scenario) -> ScenarioFile {
    let space = &s.space;
    let mut states: BTreeMap<String, Vec<StateEntry>> = s
        .states
        .iter()
        .map(|(k, v)| (k.clone(), state_entries(v)))
        .collect();
    let mut utilities: BTreeMap<String, Vec<UtilityEntry>> = s
        .utilities
        .iter()
        .filter(|(k, _)| !(s.lambda.is_some() && k.as_str() == BELL_UTILITY))
        .map(|(k, v)| (k.clone(), utility_entries(v, None)))
        .collect();
    let mut policies: BTreeMap<String, PolicyEntry> = s
        .policies
        .iter()
        .map(|(k, v)| (k.clone(), policy_entry(v)))
        .collect();
    let default_covariates = space.covariates() == [crate::model::DEFAULT_COVARIATE];
    ScenarioFile {
        name: Some(s.name.clone()),
        decisions: space.decisions(),
        decision_labels: s.decision_labels.clone(),
        outcomes: space
            .outcomes()
            .labels()
            .iter()
            .zip(space.outcomes().values())
            .map(|(label, v)| OutcomeEntry {
                label: label.clone(),
                value: exact(v),
            })
            .collect(),
        covariates: (!default_covariates).then(|| space.covariates().to_vec()),
        state: states.remove(DEFAULT_NAME),
        states,
        utility: utilities.remove(DEFAULT_NAME),
        utilities,
        policy: policies.remove(DEFAULT_NAME),
        policies,
        lambda: s.lambda.clone(),
        comparisons: s.comparisons.iter().map(|&(i, j)| [i, j]).collect(),
        independence: s.independence.as_ref().map(|i| IndependenceEntry {
            decision: i.decision,
            p: i.p.clone(),
            q: i.q.clone(),
            r: i.r.clone(),
            alpha: exact(&i.alpha),
        }),
        projection: s.projection.as_ref().map(projection_entry),
        expected: s
            .expected
            .iter()
            .map(|(k, v)| {
                let e = match v {
                    Expected::Flag(b) => ExpectedEntry::Flag(*b),
                    Expected::Exact(v) => ExpectedEntry::Exact(exact(v)),
                    Expected::Text(t) => ExpectedEntry::Text { text: t.clone() },
                    Expected::Approx { value, tolerance } => ExpectedEntry::Approx {
                        approx: exact(value),
                        tolerance: exact(tolerance),
                    },
                    Expected::Interval(lo, hi) => ExpectedEntry::Interval {
                        lower: exact(lo),
                        upper: exact(hi),
                    },
                };
                (k.clone(), e)
            })
            .collect(),
    }
}

fn policy_entry(p: &Policy) -> PolicyEntry {
    let space = p.space();
    match p.kind() {
        PolicyKind::Dirac(d) => PolicyEntry::Dirac { d: *d },
        PolicyKind::Covariate(rows) => PolicyEntry::Covariate {
            table: rows
                .iter()
                .enumerate()
                .map(|(x, row)| {
                    (
                        space.covariates()[x].clone(),
                        row.iter().map(exact).collect(),
                    )
                })
                .collect(),
        },
        PolicyKind::Oracle(table) => PolicyEntry::Oracle {
            table: table
                .iter()
                .map(|(&(profile, x), row)| OracleRow {
                    y: space
                        .profile(profile)
                        .iter()
                        .map(|&a| space.outcomes().label(a).to_string())
                        .collect(),
                    x: space.covariates()[x].clone(),
                    probs: row.iter().map(exact).collect(),
                })
                .collect(),
        },
    }
}

fn projection_entry(p: &ProjectionSetup) -> ProjectionEntry {
    let set = &p.lotteries;
    ProjectionEntry {
        lotteries: (0..set.len())
            .map(|i| LotteryEntry {
                label: set.label(i).to_string(),
                probs: set.lottery(i).iter().map(exact).collect(),
            })
            .collect(),
        pairwise_win: p.pairwise_win,
        menus: p
            .menus
            .iter()
            .map(|(m, u)| MenuEntry {
                items: menu_labels(set, m),
                utility: utility_entries(u, None),
            })
            .collect(),
        contexts: p
            .contexts
            .iter()
            .map(|c| {
                let labels = menu_labels(set, &c.items);
                ContextEntry {
                    name: c.name.clone(),
                    utilities: c
                        .utilities
                        .iter()
                        .map(|(k, u)| (k.clone(), utility_entries(u, None)))
                        .collect(),
                    independence: c.independence.as_ref().map(|i| ContextIndependenceEntry {
                        utility: i.utility.clone(),
                        left: labels[i.left].clone(),
                        right: labels[i.right].clone(),
                        common: labels[i.common].clone(),
                        alpha: exact(&i.alpha),
                    }),
                    items: labels,
                }
            })
            .collect(),
    }
}
