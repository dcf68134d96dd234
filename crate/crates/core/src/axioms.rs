//! Structural classes of utility tables and witnesses for the expected-utility
//! axioms on laws over decisions × potential outcomes × covariates.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::model::{induced_law, Law, Policy, State, UtilityTable};
use crate::rational::{half, rat};
use crate::reduction::{
    additive_decompose, default_baseline, reduce_to_outcome, reduce_to_standard,
};
use crate::valuation::expected_utility;
use crate::{Error, Execution, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    Completeness,
    Transitivity,
    Independence,
    Continuity,
    IrrelevanceCounterfactualOutcomes,
    IrrelevanceCorrelation,
    OutcomeSufficiency,
}

impl AxiomKind {
    pub fn name(self) -> &'static str {
        match self {
            AxiomKind::Completeness => "completeness",
            AxiomKind::Transitivity => "transitivity",
            AxiomKind::Independence => "independence",
            AxiomKind::Continuity => "continuity",
            AxiomKind::IrrelevanceCounterfactualOutcomes => "irrelevance-counterfactual-outcomes",
            AxiomKind::IrrelevanceCorrelation => "irrelevance-correlation",
            AxiomKind::OutcomeSufficiency => "outcome-sufficiency",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `V(p) > V(q)` but `V(αp + (1−α)r) ≤ V(αq + (1−α)r)`.
    Independence {
        indices: Option<[usize; 3]>,
        alpha: Rational,
        value_p: Rational,
        value_q: Rational,
        value_mixed_p: Rational,
        value_mixed_q: Rational,
        mixed_p: Law,
        mixed_q: Law,
    },
    Continuity(ContinuityWitness),
    /// `i ≿ j`, `j ≿ k` but not `i ≿ k`.
    Cycle([usize; 3]),
    /// Two values an axiom requires to coincide.
    ValueGap {
        left: Rational,
        right: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: AxiomKind,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl AxiomReport {
    fn holds(axiom: AxiomKind) -> Self {
        AxiomReport {
            axiom,
            holds: true,
            witness: None,
        }
    }

    fn fails(axiom: AxiomKind, witness: Witness) -> Self {
        AxiomReport {
            axiom,
            holds: false,
            witness: Some(witness),
        }
    }

    /// Completeness of a relation read off exact values is not searched: the
    /// order on rationals is total.
    pub fn completeness_of_values() -> Self {
        Self::holds(AxiomKind::Completeness)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UtilityClasses {
    pub outcome: bool,
    pub standard: bool,
    pub additive: bool,
}

impl UtilityClasses {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.outcome {
            out.push("outcome");
        }
        if self.standard {
            out.push("standard");
        }
        if self.additive {
            out.push("additive");
        }
        out
    }
}

pub fn classify_utility(utility: &UtilityTable) -> UtilityClasses {
    let additive = additive_decompose(utility, &default_baseline(utility.space()))
        .expect("default baseline is a valid profile")
        .is_additive();
    UtilityClasses {
        outcome: reduce_to_outcome(utility).reduced().is_some(),
        standard: reduce_to_standard(utility).reduced().is_some(),
        additive,
    }
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_positive() && *alpha <= Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(
            "mixing weight must lie in (0, 1]".into(),
        ))
    }
}

/// One instance of the independence axiom for the value functional `value`.
pub fn check_independence<F>(
    p: &Law,
    q: &Law,
    r: &Law,
    alpha: &Rational,
    value: F,
) -> Result<AxiomReport>
where
    F: Fn(&Law) -> Result<Rational>,
{
    check_alpha(alpha)?;
    independence_instance(p, q, r, alpha, &value, None)
}

fn independence_instance<F>(
    p: &Law,
    q: &Law,
    r: &Law,
    alpha: &Rational,
    value: &F,
    indices: Option<[usize; 3]>,
) -> Result<AxiomReport>
where
    F: Fn(&Law) -> Result<Rational>,
{
    let vp = value(p)?;
    let vq = value(q)?;
    if vp <= vq {
        return Ok(AxiomReport::holds(AxiomKind::Independence));
    }
    let weights = [alpha.clone(), Rational::one() - alpha];
    let mixed_p = Law::mix(&[p.clone(), r.clone()], &weights)?;
    let mixed_q = Law::mix(&[q.clone(), r.clone()], &weights)?;
    let vmp = value(&mixed_p)?;
    let vmq = value(&mixed_q)?;
    if vmp > vmq {
        return Ok(AxiomReport::holds(AxiomKind::Independence));
    }
    Ok(AxiomReport::fails(
        AxiomKind::Independence,
        Witness::Independence {
            indices,
            alpha: alpha.clone(),
            value_p: vp,
            value_q: vq,
            value_mixed_p: vmp,
            value_mixed_q: vmq,
            mixed_p,
            mixed_q,
        },
    ))
}

/// `{1/n, 2/n, …, 1}`.
pub fn alpha_grid(n: u32) -> Vec<Rational> {
    (1..=n as i64).map(|i| rat(i, n as i64)).collect()
}

/// Searches all ordered triples `(p, q, r)` of `family` with `p ≠ q` and all
/// weights on `alphas`, returning the first violation in lexicographic order
/// of `(p, q, r, α)`.
pub fn search_independence<F>(
    family: &[Law],
    alphas: &[Rational],
    value: F,
    exec: Execution,
) -> Result<AxiomReport>
where
    F: Fn(&Law) -> Result<Rational> + Sync,
{
    for a in alphas {
        check_alpha(a)?;
    }
    let n = family.len();
    let per_pair = n * alphas.len();
    let found = exec.find_first(n * n * per_pair, |key| {
        let (i, j, rest) = (key / (n * per_pair), (key / per_pair) % n, key % per_pair);
        let (k, a) = (rest / alphas.len(), rest % alphas.len());
        if i == j {
            return None;
        }
        match independence_instance(
            &family[i],
            &family[j],
            &family[k],
            &alphas[a],
            &value,
            Some([i, j, k]),
        ) {
            Ok(report) if report.holds => None,
            other => Some(other),
        }
    });
    found.unwrap_or_else(|| Ok(AxiomReport::holds(AxiomKind::Independence)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuityWitness {
    pub alpha_star: Rational,
    pub alpha: Rational,
    pub beta: Rational,
}

/// Weights separating `q` from mixtures of `p` and `r` given exact values
/// `V(p) > V(q) > V(r)`.
pub fn continuity_from_values(
    vp: &Rational,
    vq: &Rational,
    vr: &Rational,
) -> Result<ContinuityWitness> {
    if !(vp > vq && vq > vr) {
        return Err(Error::Precondition(
            "continuity witness needs V(p) > V(q) > V(r)".into(),
        ));
    }
    let alpha_star = (vq - vr) / (vp - vr);
    let alpha = (&alpha_star + Rational::one()) * half();
    let beta = &alpha_star * half();
    let mixed = |w: &Rational| w * vp + (Rational::one() - w) * vr;
    assert!(mixed(&alpha) > *vq && *vq > mixed(&beta));
    Ok(ContinuityWitness {
        alpha_star,
        alpha,
        beta,
    })
}

pub fn continuity_witness(
    p: &Law,
    q: &Law,
    r: &Law,
    utility: &UtilityTable,
) -> Result<ContinuityWitness> {
    continuity_from_values(
        &expected_utility(p, utility)?,
        &expected_utility(q, utility)?,
        &expected_utility(r, utility)?,
    )
}

/// Re-checks `αV(p) + (1−α)V(r) > V(q) > βV(p) + (1−β)V(r)` on the mixtures
/// themselves.
pub fn verify_continuity(
    p: &Law,
    q: &Law,
    r: &Law,
    utility: &UtilityTable,
    w: &ContinuityWitness,
) -> Result<bool> {
    let vq = expected_utility(q, utility)?;
    let mix = |a: &Rational| -> Result<Rational> {
        expected_utility(
            &Law::mix(&[p.clone(), r.clone()], &[a.clone(), Rational::one() - a])?,
            utility,
        )
    };
    Ok(w.alpha > Rational::zero()
        && w.alpha < Rational::one()
        && w.beta > Rational::zero()
        && w.beta < Rational::one()
        && mix(&w.alpha)? > vq
        && vq > mix(&w.beta)?)
}

/// Scans ordered triples of distinct items for `i ≿ j ≿ k` without `i ≿ k`.
pub fn transitivity_scan<F>(n: usize, weakly_prefers: F, exec: Execution) -> AxiomReport
where
    F: Fn(usize, usize) -> bool + Sync,
{
    let mut matrix = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            matrix[i * n + j] = i == j || weakly_prefers(i, j);
        }
    }
    let found = exec.find_first(n * n * n, |key| {
        let (i, j, k) = (key / (n * n), (key / n) % n, key % n);
        let distinct = i != j && j != k && i != k;
        (distinct && matrix[i * n + j] && matrix[j * n + k] && !matrix[i * n + k])
            .then_some([i, j, k])
    });
    match found {
        Some(cycle) => AxiomReport::fails(AxiomKind::Transitivity, Witness::Cycle(cycle)),
        None => AxiomReport::holds(AxiomKind::Transitivity),
    }
}

/// Transitivity of the relation induced by a value functional on `laws`.
pub fn transitivity_of_values<F>(laws: &[Law], value: F, exec: Execution) -> Result<AxiomReport>
where
    F: Fn(&Law) -> Result<Rational>,
{
    let values = laws.iter().map(value).collect::<Result<Vec<_>>>()?;
    Ok(transitivity_scan(
        laws.len(),
        |i, j| values[i] >= values[j],
        exec,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalIndifference {
    /// `Y(d)` has the same law in both states.
    pub same_realized_marginal: bool,
    /// Every `Y(k)` has the same law in both states.
    pub same_marginals: bool,
    pub left_value: Rational,
    pub right_value: Rational,
    /// One report per premise the pair satisfies.
    pub reports: Vec<AxiomReport>,
}

impl MarginalIndifference {
    pub fn holds(&self) -> bool {
        self.reports.iter().all(|r| r.holds)
    }
}

/// Compares `V_A(d)` and `V_B(d)` for two states degenerate at covariate `x`
/// and reports the premise-form irrelevance axioms the pair falls under.
pub fn check_marginal_indifference(
    utility: &UtilityTable,
    d: usize,
    x: usize,
    state_a: &State,
    state_b: &State,
) -> Result<MarginalIndifference> {
    let ma = state_a.marginals();
    let mb = state_b.marginals();
    for m in [&ma, &mb] {
        if m.degenerate_covariate() != Some(x) {
            return Err(Error::Precondition(format!(
                "state is not degenerate at covariate {}",
                utility
                    .space()
                    .covariates()
                    .get(x)
                    .map(String::as_str)
                    .unwrap_or("?")
            )));
        }
    }
    let policy = Policy::dirac(utility.space(), d)?;
    let left_value = expected_utility(&induced_law(&policy, state_a)?, utility)?;
    let right_value = expected_utility(&induced_law(&policy, state_b)?, utility)?;
    let same_realized_marginal = ma.of_decision(d) == mb.of_decision(d);
    let same_marginals = ma.outcomes == mb.outcomes;
    let report = |axiom| {
        if left_value == right_value {
            AxiomReport::holds(axiom)
        } else {
            AxiomReport::fails(
                axiom,
                Witness::ValueGap {
                    left: left_value.clone(),
                    right: right_value.clone(),
                },
            )
        }
    };
    let mut reports = Vec::new();
    if same_realized_marginal {
        reports.push(report(AxiomKind::IrrelevanceCounterfactualOutcomes));
    }
    if same_marginals {
        reports.push(report(AxiomKind::IrrelevanceCorrelation));
    }
    Ok(MarginalIndifference {
        same_realized_marginal,
        same_marginals,
        left_value,
        right_value,
        reports,
    })
}

/// Realized-outcome sufficiency for `(d, x, P)` against `(d', x', Q)`: if
/// `Y(d)` under `P` and `Y(d')` under `Q` share a law, the values must agree.
pub fn check_outcome_sufficiency(
    utility: &UtilityTable,
    left: (usize, usize, &State),
    right: (usize, usize, &State),
) -> Result<AxiomReport> {
    let mut marginals = Vec::new();
    let mut values = Vec::new();
    for (d, x, state) in [left, right] {
        let m = state.marginals();
        if m.degenerate_covariate() != Some(x) {
            return Err(Error::Precondition(
                "state is not degenerate at the covariate".into(),
            ));
        }
        marginals.push(m.of_decision(d).to_vec());
        values.push(expected_utility(&Law::deterministic(d, state)?, utility)?);
    }
    if marginals[0] != marginals[1] || values[0] == values[1] {
        return Ok(AxiomReport::holds(AxiomKind::OutcomeSufficiency));
    }
    let right_value = values.pop().expect("two values");
    let left_value = values.pop().expect("two values");
    Ok(AxiomReport::fails(
        AxiomKind::OutcomeSufficiency,
        Witness::ValueGap {
            left: left_value,
            right: right_value,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{OutcomeSpace, ProblemSpace};
    use crate::rational::int;
    use std::sync::Arc;

    fn binary() -> Arc<ProblemSpace> {
        ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1]).unwrap()).unwrap()
    }

    fn gm(space: &Arc<ProblemSpace>) -> UtilityTable {
        UtilityTable::from_fn(space, |d, y, _| match (d, y) {
            (0, [1, 0]) => int(1),
            (1, [0, 1]) => rat(1, 2),
            _ => int(0),
        })
    }

    #[test]
    fn classes_of_reference_utilities() {
        let space = binary();
        assert_eq!(classify_utility(&gm(&space)), UtilityClasses::default());
        let realized = UtilityTable::from_values_fn(&space, |d, v| v[d].clone());
        assert_eq!(
            classify_utility(&realized),
            UtilityClasses {
                outcome: true,
                standard: true,
                additive: true
            }
        );
        let sum = UtilityTable::from_values_fn(&space, |_, v| &v[0] + &v[1]);
        assert_eq!(
            classify_utility(&sum),
            UtilityClasses {
                outcome: false,
                standard: false,
                additive: true
            }
        );
    }

    #[test]
    fn continuity_weights() {
        let w = continuity_from_values(&int(1), &half(), &int(0)).unwrap();
        assert_eq!(
            (w.alpha_star, w.alpha, w.beta),
            (half(), rat(3, 4), rat(1, 4))
        );
        let w = continuity_from_values(&rat(5, 9), &rat(4, 9), &int(0)).unwrap();
        assert_eq!(
            (w.alpha_star, w.alpha, w.beta),
            (rat(4, 5), rat(9, 10), rat(2, 5))
        );
        assert!(continuity_from_values(&int(1), &int(1), &int(0)).is_err());
    }

    #[test]
    fn independence_with_equal_sides_is_vacuous() {
        let space = binary();
        let u = gm(&space);
        let p = Law::dirac(&space, 0, &[1, 0], 0).unwrap();
        let r = Law::dirac(&space, 1, &[0, 1], 0).unwrap();
        let report = check_independence(&p, &p, &r, &half(), |l| expected_utility(l, &u)).unwrap();
        assert!(report.holds);
        assert!(check_independence(&p, &p, &r, &int(0), |l| expected_utility(l, &u)).is_err());
        assert!(check_independence(&p, &p, &r, &int(2), |l| expected_utility(l, &u)).is_err());
    }

    #[test]
    fn cycle_is_reported_first_in_lexicographic_order() {
        // a ≻ b, b ≻ c, c ≻ a plus an isolated fourth item beaten by all.
        let beats =
            |i: usize, j: usize| matches!((i, j), (0, 1) | (1, 2) | (2, 0)) || (j == 3 && i != 3);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let report = transitivity_scan(4, beats, exec);
            assert_eq!(report.witness, Some(Witness::Cycle([0, 1, 2])));
        }
        assert!(transitivity_scan(2, |_, _| false, Execution::Sequential).holds);
    }

    #[test]
    fn sum_utility_violates_counterfactual_irrelevance() {
        let space = binary();
        let sum = UtilityTable::from_values_fn(&space, |_, v| &v[0] + &v[1]);
        let p = State::dirac(&space, &[0, 1], 0).unwrap();
        let q = State::dirac(&space, &[0, 0], 0).unwrap();
        let check = check_marginal_indifference(&sum, 0, 0, &p, &q).unwrap();
        assert!(check.same_realized_marginal && !check.same_marginals);
        assert_eq!(
            (check.left_value.clone(), check.right_value.clone()),
            (int(1), int(0))
        );
        assert!(!check.holds());
        let mixed = State::new(&space, [(vec![0, 0], 0, half()), (vec![1, 1], 0, half())]).unwrap();
        let crossed =
            State::new(&space, [(vec![0, 1], 0, half()), (vec![1, 0], 0, half())]).unwrap();
        let check = check_marginal_indifference(&sum, 1, 0, &mixed, &crossed).unwrap();
        assert!(check.same_marginals && check.holds());
    }
}
