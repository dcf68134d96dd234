//! JSON shapes shared by scenario files and reports. Rationals always travel
//! as `"num/den"` strings.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::axioms::{AxiomReport, Witness};
use crate::identification::BoundResult;
use crate::model::{Law, ProblemSpace, State, UtilityTable};
use crate::rational::{format_rational, parse_rational};
use crate::reduction::{AdditiveDecomposition, Cell};
use crate::{Error, Rational, Result};

/// An exact rational that only deserializes from a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct ExactVisitor;

impl Visitor<'_> for ExactVisitor {
    type Value = Exact;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an exact rational string such as \"1/3\"")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exact, E> {
        parse_rational(v).map(Exact).map_err(E::custom)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exact, E> {
        Err(E::custom(format!(
            "float {v} rejected; write it as a rational string"
        )))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exact, E> {
        Err(E::custom(format!(
            "number {v} rejected; write it as a rational string"
        )))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exact, E> {
        Err(E::custom(format!(
            "number {v} rejected; write it as a rational string"
        )))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(ExactVisitor)
    }
}

pub fn exact(v: &Rational) -> Exact {
    Exact(v.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEntry {
    pub y: Vec<String>,
    #[serde(default = "default_x")]
    pub x: String,
    pub prob: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawEntry {
    pub d: usize,
    pub y: Vec<String>,
    pub x: String,
    pub prob: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UtilityEntry {
    pub d: usize,
    pub y: Vec<String>,
    #[serde(default = "default_x")]
    pub x: String,
    pub value: Exact,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub component: Option<String>,
}

fn default_x() -> String {
    crate::model::DEFAULT_COVARIATE.to_string()
}

fn labels(space: &ProblemSpace, y: &[usize]) -> Vec<String> {
    y.iter()
        .map(|&a| space.outcomes().label(a).to_string())
        .collect()
}

fn resolve_profile(space: &ProblemSpace, y: &[String]) -> Result<Vec<usize>> {
    if y.len() != space.decisions() {
        return Err(Error::Scenario(format!(
            "outcome vector {y:?} needs {} entries",
            space.decisions()
        )));
    }
    y.iter()
        .map(|l| {
            space
                .outcomes()
                .index_of(l)
                .ok_or_else(|| Error::Scenario(format!("unknown outcome label {l:?}")))
        })
        .collect()
}

pub fn resolve_covariate(space: &ProblemSpace, x: &str) -> Result<usize> {
    space
        .covariate_index(x)
        .ok_or_else(|| Error::Scenario(format!("unknown covariate label {x:?}")))
}

pub fn state_entries(state: &State) -> Vec<StateEntry> {
    let space = state.space();
    state
        .entries()
        .map(|(profile, x, p)| StateEntry {
            y: labels(space, &space.profile(profile)),
            x: space.covariates()[x].clone(),
            prob: exact(p),
        })
        .collect()
}

pub fn state_from_entries(space: &Arc<ProblemSpace>, entries: &[StateEntry]) -> Result<State> {
    let cells = entries
        .iter()
        .map(|e| {
            Ok((
                resolve_profile(space, &e.y)?,
                resolve_covariate(space, &e.x)?,
                e.prob.0.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    State::new(space, cells)
}

pub fn law_entries(law: &Law) -> Vec<LawEntry> {
    let space = law.space();
    law.entries()
        .map(|(d, profile, x, p)| LawEntry {
            d,
            y: labels(space, &space.profile(profile)),
            x: space.covariates()[x].clone(),
            prob: exact(p),
        })
        .collect()
}

pub fn utility_entries(utility: &UtilityTable, component: Option<&str>) -> Vec<UtilityEntry> {
    let space = utility.space();
    utility
        .cells()
        .map(|(d, profile, x, v)| UtilityEntry {
            d,
            y: labels(space, &space.profile(profile)),
            x: space.covariates()[x].clone(),
            value: exact(v),
            component: component.map(str::to_string),
        })
        .collect()
}

pub fn utility_from_entries(
    space: &Arc<ProblemSpace>,
    entries: &[UtilityEntry],
) -> Result<UtilityTable> {
    let cells = entries
        .iter()
        .map(|e| {
            Ok((
                e.d,
                resolve_profile(space, &e.y)?,
                resolve_covariate(space, &e.x)?,
                e.value.0.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    UtilityTable::from_entries(space, cells)
}

fn r(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

pub fn cell_json(space: &ProblemSpace, cell: &Cell) -> Value {
    json!({
        "d": cell.d,
        "y": labels(space, &cell.y),
        "x": space.covariates()[cell.x],
        "value": r(&cell.value),
    })
}

pub fn bound_json(bound: &BoundResult) -> Value {
    json!({
        "lower": r(&bound.lower),
        "upper": r(&bound.upper),
        "argmin": state_entries(&bound.argmin),
        "argmax": state_entries(&bound.argmax),
    })
}

pub fn witness_json(witness: &Witness) -> Value {
    match witness {
        Witness::Independence {
            indices,
            alpha,
            value_p,
            value_q,
            value_mixed_p,
            value_mixed_q,
            mixed_p,
            mixed_q,
        } => json!({
            "kind": "independence",
            "indices": indices,
            "alpha": r(alpha),
            "values": [r(value_p), r(value_q), r(value_mixed_p), r(value_mixed_q)],
            "mixed_p": law_entries(mixed_p),
            "mixed_q": law_entries(mixed_q),
        }),
        Witness::Continuity(c) => json!({
            "kind": "continuity",
            "alpha_star": r(&c.alpha_star),
            "alpha": r(&c.alpha),
            "beta": r(&c.beta),
        }),
        Witness::Cycle(t) => json!({ "kind": "cycle", "triple": t }),
        Witness::ValueGap { left, right } => {
            json!({ "kind": "value-gap", "left": r(left), "right": r(right) })
        }
    }
}

pub fn axiom_report_json(report: &AxiomReport) -> Value {
    json!({
        "axiom": report.axiom.name(),
        "holds": report.holds,
        "witness": report.witness.as_ref().map(witness_json),
    })
}

/// Each component lifted to a full table, tagged `component:k`.
pub fn decomposition_json(dec: &AdditiveDecomposition) -> Value {
    let mut entries = Vec::new();
    for (k, c) in dec.components.iter().enumerate() {
        entries.extend(utility_entries(&c.lift(k), Some(&format!("component:{k}"))));
    }
    let space = dec.components.first().map(|c| c.space().clone());
    json!({
        "baseline": dec.baseline,
        "residual": r(&dec.residual),
        "additive": dec.is_additive(),
        "worst": match (&dec.worst, &space) {
            (Some(cell), Some(space)) => cell_json(space, cell),
            _ => Value::Null,
        },
        "entries": entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_and_bare_numbers_are_rejected() {
        assert_eq!(
            serde_json::from_str::<Exact>("\"3/6\"").unwrap().0,
            crate::rational::rat(1, 2)
        );
        let e = serde_json::from_str::<Exact>("0.5")
            .unwrap_err()
            .to_string();
        assert!(e.contains("float"), "{e}");
        assert!(serde_json::from_str::<Exact>("1").is_err());
    }
}
