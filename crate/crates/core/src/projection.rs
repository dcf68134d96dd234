//! Projections of counterfactual preferences onto choice among lotteries on
//! realized outcomes: per-menu models, one global context model, revealed
//! relations and the Sen conditions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::model::{check_distribution, OutcomeSpace, ProblemSpace, State, UtilityTable};
use crate::valuation::{decision_value, Verdict};
use crate::{Error, Execution, Rational, Result};

/// Largest index set for which every menu is enumerated.
pub const MAX_ITEMS: usize = 20;

/// Named lotteries on a shared outcome space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotterySet {
    outcomes: OutcomeSpace,
    labels: Vec<String>,
    lotteries: Vec<Vec<Rational>>,
}

impl LotterySet {
    pub fn new(outcomes: OutcomeSpace, entries: Vec<(String, Vec<Rational>)>) -> Result<Self> {
        let mut labels = Vec::new();
        let mut lotteries = Vec::new();
        for (label, p) in entries {
            if p.len() != outcomes.len() {
                return Err(Error::InvalidDistribution(format!(
                    "lottery {label} has {} entries for {} outcomes",
                    p.len(),
                    outcomes.len()
                )));
            }
            check_distribution(&p, &format!("lottery {label}"))?;
            if labels.contains(&label) {
                return Err(Error::InvalidArgument(format!("duplicate lottery {label}")));
            }
            labels.push(label);
            lotteries.push(p);
        }
        if labels.is_empty() {
            return Err(Error::InvalidArgument("no lotteries".into()));
        }
        Ok(LotterySet {
            outcomes,
            labels,
            lotteries,
        })
    }

    pub fn outcomes(&self) -> &OutcomeSpace {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn lottery(&self, i: usize) -> &[Rational] {
        &self.lotteries[i]
    }

    /// Index of a lottery equal to `p`, if any.
    pub fn find(&self, p: &[Rational]) -> Option<usize> {
        self.lotteries.iter().position(|q| q == p)
    }

    /// Potential-outcome space for choosing among `menu`, one coordinate per
    /// menu item in menu order.
    pub fn space_for(&self, menu: &Menu) -> Result<Arc<ProblemSpace>> {
        ProblemSpace::without_covariates(menu.len(), self.outcomes.clone())
    }

    /// Independent coupling of the menu's lotteries.
    pub fn independent_coupling(&self, menu: &Menu) -> Result<State> {
        let space = self.space_for(menu)?;
        let marginals: Vec<Vec<Rational>> = menu
            .items()
            .iter()
            .map(|&i| self.lotteries[i].clone())
            .collect();
        State::independent(&space, &marginals, 0)
    }

    fn check_menu(&self, menu: &Menu) -> Result<()> {
        match menu.items().iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::InvalidArgument(format!(
                "menu item {i} out of range"
            ))),
            None => Ok(()),
        }
    }
}

/// Convex combination of lotteries.
pub fn mix_lotteries(lotteries: &[&[Rational]], weights: &[Rational]) -> Result<Vec<Rational>> {
    if lotteries.len() != weights.len() || lotteries.is_empty() {
        return Err(Error::InvalidArgument(
            "mixture needs one weight per lottery".into(),
        ));
    }
    check_distribution(weights, "mixture weights")?;
    let width = lotteries[0].len();
    if lotteries.iter().any(|l| l.len() != width) {
        return Err(Error::SpaceMismatch("lotteries of different length".into()));
    }
    Ok((0..width)
        .map(|a| lotteries.iter().zip(weights).map(|(l, w)| &l[a] * w).sum())
        .collect())
}

/// A nonempty set of lottery indices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Menu(Vec<usize>);

impl Menu {
    pub fn new(mut items: Vec<usize>) -> Result<Self> {
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            return Err(Error::InvalidArgument("menu is empty".into()));
        }
        Ok(Menu(items))
    }

    pub fn pair(i: usize, j: usize) -> Result<Self> {
        Self::new(vec![i, j])
    }

    pub fn from_mask(mask: u64) -> Result<Self> {
        Self::new((0..64).filter(|&i| mask >> i & 1 == 1).collect())
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn position(&self, i: usize) -> Option<usize> {
        self.0.binary_search(&i).ok()
    }
}

/// Utility over a menu's own coordinates and a coupling of its lotteries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MenuModel {
    pub utility: UtilityTable,
    pub coupling: State,
}

/// Per-menu models for the menu-dependent projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MenuAssignment {
    lotteries: LotterySet,
    models: BTreeMap<Menu, MenuModel>,
}

impl MenuAssignment {
    pub fn new(lotteries: LotterySet) -> Self {
        MenuAssignment {
            lotteries,
            models: BTreeMap::new(),
        }
    }

    pub fn lotteries(&self) -> &LotterySet {
        &self.lotteries
    }

    /// Assigns a model after checking that the coupling's marginals are the
    /// menu's lotteries.
    pub fn assign(&mut self, menu: Menu, model: MenuModel) -> Result<()> {
        self.lotteries.check_menu(&menu)?;
        let space = self.lotteries.space_for(&menu)?;
        if **model.utility.space() != *space || **model.coupling.space() != *space {
            return Err(Error::SpaceMismatch(format!(
                "menu model for {:?} must live on {} coordinates",
                menu.items(),
                menu.len()
            )));
        }
        let marginals = model.coupling.marginals();
        for (pos, &i) in menu.items().iter().enumerate() {
            if marginals.of_decision(pos) != self.lotteries.lottery(i) {
                return Err(Error::InvalidDistribution(format!(
                    "coupling for menu {:?} does not reproduce lottery {}",
                    menu.items(),
                    self.lotteries.label(i)
                )));
            }
        }
        self.models.insert(menu, model);
        Ok(())
    }

    /// Assigns `utility` with the independent coupling of the menu.
    pub fn assign_independent(&mut self, menu: Menu, utility: UtilityTable) -> Result<()> {
        let coupling = self.lotteries.independent_coupling(&menu)?;
        self.assign(menu, MenuModel { utility, coupling })
    }

    pub fn model(&self, menu: &Menu) -> Option<&MenuModel> {
        self.models.get(menu)
    }

    /// Expected utility of each menu item under the menu's model.
    pub fn values(&self, menu: &Menu) -> Result<Vec<Rational>> {
        let model = self
            .models
            .get(menu)
            .ok_or_else(|| Error::MissingAssignment(menu.items().to_vec()))?;
        (0..menu.len())
            .map(|pos| decision_value(pos, &model.coupling, &model.utility))
            .collect()
    }
}

fn argmax(menu: &Menu, values: &[Rational]) -> Vec<usize> {
    let best = values.iter().max().expect("menus are nonempty");
    menu.items()
        .iter()
        .zip(values)
        .filter(|(_, v)| *v == best)
        .map(|(&i, _)| i)
        .collect()
}

/// Full argmax set of the menu under its own model. Singleton menus need no
/// model.
pub fn menu_choice(assignment: &MenuAssignment, menu: &Menu) -> Result<Vec<usize>> {
    assignment.lotteries.check_menu(menu)?;
    if menu.len() == 1 {
        return Ok(menu.items().to_vec());
    }
    Ok(argmax(menu, &assignment.values(menu)?))
}

/// `ũ(d; y_d, y_{d'}) = 1{y_d > y_{d'}}` on two coordinates.
pub fn strict_win_utility(outcomes: &OutcomeSpace) -> Result<UtilityTable> {
    let space = ProblemSpace::without_covariates(2, outcomes.clone())?;
    Ok(UtilityTable::from_values_fn(&space, |d, v| {
        if v[d] > v[1 - d] {
            Rational::one()
        } else {
            Rational::zero()
        }
    }))
}

/// One global utility over all lotteries and one state reproducing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextModel {
    lotteries: LotterySet,
    utility: UtilityTable,
    state: State,
    values: Vec<Rational>,
}

impl ContextModel {
    pub fn new(lotteries: LotterySet, utility: UtilityTable, state: State) -> Result<Self> {
        let space = utility.space();
        if space.decisions() != lotteries.len() || **state.space() != **space {
            return Err(Error::SpaceMismatch(
                "context utility and state need one coordinate per lottery".into(),
            ));
        }
        let marginals = state.marginals();
        for i in 0..lotteries.len() {
            if marginals.of_decision(i) != lotteries.lottery(i) {
                return Err(Error::InvalidDistribution(format!(
                    "state does not reproduce lottery {}",
                    lotteries.label(i)
                )));
            }
        }
        let values = (0..lotteries.len())
            .map(|d| decision_value(d, &state, &utility))
            .collect::<Result<_>>()?;
        Ok(ContextModel {
            lotteries,
            utility,
            state,
            values,
        })
    }

    /// Builds the model with the independent coupling of all lotteries.
    pub fn independent(lotteries: LotterySet, utility: UtilityTable) -> Result<Self> {
        let all = Menu::new((0..lotteries.len()).collect())?;
        let state = lotteries.independent_coupling(&all)?;
        Self::new(lotteries, utility, state)
    }

    pub fn lotteries(&self) -> &LotterySet {
        &self.lotteries
    }

    pub fn utility(&self) -> &UtilityTable {
        &self.utility
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    /// `V_P(d; ũ)` for every lottery.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

pub fn context_choice(model: &ContextModel, menu: &Menu) -> Result<Vec<usize>> {
    model.lotteries.check_menu(menu)?;
    let values: Vec<Rational> = menu
        .items()
        .iter()
        .map(|&i| model.values[i].clone())
        .collect();
    Ok(argmax(menu, &values))
}

/// Checks a Δ(𝒴) instance of the independence axiom for a context model:
/// `i ≻ j` should imply `α p_i + (1−α) p_k ≻ α p_j + (1−α) p_k`. Only
/// applies when both mixtures are themselves lotteries of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LotteryIndependence {
    pub mixed_left: Option<usize>,
    pub mixed_right: Option<usize>,
    pub premise: bool,
    /// `false` when the premise holds, both mixtures are lotteries of the
    /// model, and the mixture ranking does not follow.
    pub holds: bool,
}

pub fn lottery_independence(
    model: &ContextModel,
    left: usize,
    right: usize,
    common: usize,
    alpha: &Rational,
) -> Result<LotteryIndependence> {
    let weights = [alpha.clone(), Rational::one() - alpha];
    let set = &model.lotteries;
    let ml = mix_lotteries(&[set.lottery(left), set.lottery(common)], &weights)?;
    let mr = mix_lotteries(&[set.lottery(right), set.lottery(common)], &weights)?;
    let (mixed_left, mixed_right) = (set.find(&ml), set.find(&mr));
    let premise = model.values[left] > model.values[right];
    let holds = match (premise, mixed_left, mixed_right) {
        (true, Some(a), Some(b)) => model.values[a] > model.values[b],
        _ => true,
    };
    Ok(LotteryIndependence {
        mixed_left,
        mixed_right,
        premise,
        holds,
    })
}

/// Pairwise revealed relation `i ≿ j ⟺ i ∈ χ({i, j})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    n: usize,
    weak: Vec<bool>,
}

impl RelationMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weakly_prefers(&self, i: usize, j: usize) -> bool {
        i == j || self.weak[i * self.n + j]
    }

    pub fn verdict(&self, i: usize, j: usize) -> Verdict {
        match (self.weakly_prefers(i, j), self.weakly_prefers(j, i)) {
            (true, true) => Verdict::Indifferent,
            (true, false) => Verdict::StrictlyPrefersLeft,
            _ => Verdict::StrictlyPrefersRight,
        }
    }
}

pub fn revealed_relation<F>(n: usize, chooser: F) -> Result<RelationMatrix>
where
    F: Fn(&Menu) -> Result<Vec<usize>>,
{
    let mut weak = vec![false; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let menu = Menu::pair(i, j)?;
            let chosen = chooser(&menu)?;
            if chosen.is_empty() || chosen.iter().any(|c| !menu.contains(*c)) {
                return Err(Error::InvalidArgument(format!(
                    "chooser returned {chosen:?} for menu {:?}",
                    menu.items()
                )));
            }
            weak[i * n + j] = chosen.contains(&i);
            weak[j * n + i] = chosen.contains(&j);
        }
    }
    Ok(RelationMatrix { n, weak })
}

/// Choices on every nonempty menu of `0..n`, keyed by menu mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceRecord {
    n: usize,
    choices: BTreeMap<u64, u64>,
}

impl ChoiceRecord {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ITEMS {
            return Err(Error::InvalidArgument(format!(
                "choice records need 1 to {MAX_ITEMS} items, got {n}"
            )));
        }
        Ok(ChoiceRecord {
            n,
            choices: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, menu: &Menu, chosen: &[usize]) -> Result<()> {
        let rejected = chosen.is_empty() || chosen.iter().any(|c| !menu.contains(*c));
        if rejected || menu.items().iter().any(|&i| i >= self.n) {
            return Err(Error::InvalidArgument(format!(
                "choice {chosen:?} is not a nonempty subset of menu {:?}",
                menu.items()
            )));
        }
        let mask = chosen.iter().fold(0u64, |m, &i| m | 1 << i);
        self.choices.insert(menu.mask(), mask);
        Ok(())
    }

    /// Records `chooser` on every nonempty menu.
    pub fn from_chooser<F>(n: usize, chooser: F, exec: Execution) -> Result<Self>
    where
        F: Fn(&Menu) -> Result<Vec<usize>> + Sync,
    {
        let mut record = Self::new(n)?;
        let menus = (1u64 << n) - 1;
        let chosen = exec.map(menus as usize, |i| {
            let menu = Menu::from_mask(i as u64 + 1)?;
            chooser(&menu).map(|c| (menu, c))
        });
        for entry in chosen {
            let (menu, c) = entry?;
            record.insert(&menu, &c)?;
        }
        Ok(record)
    }

    pub fn items(&self) -> usize {
        self.n
    }

    pub fn chosen(&self, menu: &Menu) -> Option<Vec<usize>> {
        self.choices.get(&menu.mask()).map(|&m| {
            Menu::from_mask(m)
                .expect("choices are nonempty")
                .items()
                .to_vec()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenViolation {
    /// The smaller menu `𝒜 ⊆ ℬ`.
    pub smaller: Menu,
    pub larger: Menu,
    pub item: usize,
    /// For β: the item chosen alongside `item` in `𝒜` but dropped from `ℬ`.
    pub partner: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SenReport {
    pub alpha: Option<SenViolation>,
    pub beta: Option<SenViolation>,
}

impl SenReport {
    pub fn alpha_holds(&self) -> bool {
        self.alpha.is_none()
    }

    pub fn beta_holds(&self) -> bool {
        self.beta.is_none()
    }
}

/// Checks Sen's α and β on every pair of menus `𝒜 ⊆ ℬ`.
///
/// Larger menus are enumerated by ascending mask, then their submenus by
/// ascending mask, then items in index order; the first violation of each
/// condition is returned.
pub fn sen_check(record: &ChoiceRecord) -> Result<SenReport> {
    let full = (1u64 << record.n) - 1;
    for mask in 1..=full {
        if !record.choices.contains_key(&mask) {
            return Err(Error::InvalidArgument(format!(
                "choice record has no entry for menu {:?}",
                Menu::from_mask(mask)?.items()
            )));
        }
    }
    let mut alpha = None;
    let mut beta = None;
    for b in 1..=full {
        let cb = record.choices[&b];
        for a in (1..=b).filter(|a| a & b == *a && *a != b) {
            let ca = record.choices[&a];
            let violation = |item: usize, partner: Option<usize>| SenViolation {
                smaller: Menu::from_mask(a).expect("nonempty"),
                larger: Menu::from_mask(b).expect("nonempty"),
                item,
                partner,
            };
            for d in 0..record.n {
                let bit = 1u64 << d;
                if alpha.is_none() && a & bit != 0 && cb & bit != 0 && ca & bit == 0 {
                    alpha = Some(violation(d, None));
                }
                if beta.is_none() && ca & bit != 0 && cb & bit != 0 {
                    if let Some(e) = (0..record.n).find(|&e| ca >> e & 1 == 1 && cb >> e & 1 == 0) {
                        beta = Some(violation(d, Some(e)));
                    }
                }
            }
            if alpha.is_some() && beta.is_some() {
                return Ok(SenReport { alpha, beta });
            }
        }
    }
    Ok(SenReport { alpha, beta })
}

/// `ũ(d; y_d, y_{d'}) = u(y_d) + h(y_d, y_{d'})` with `h` symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LanzaniDecomposition {
    Decomposed {
        u: Vec<Rational>,
        /// Row-major `h[a * M + b]`.
        h: Vec<Rational>,
    },
    /// Outcomes `(a, b, c)` whose antisymmetric part `A(a,b) + A(b,c) + A(c,a)`
    /// does not vanish, which rules out any such split.
    Infeasible {
        triple: [usize; 3],
        cycle_sum: Rational,
    },
}

/// Splits a label-symmetric two-coordinate utility into a realized-outcome
/// part and a symmetric part, normalized so that `h(min, min) = 0`.
pub fn lanzani_decompose(utility: &UtilityTable) -> Result<LanzaniDecomposition> {
    let space = utility.space();
    if space.decisions() != 2 || space.covariate_count() != 1 {
        return Err(Error::Precondition(
            "needs two coordinates and no covariates".into(),
        ));
    }
    let m = space.outcome_count();
    let g = |a: usize, b: usize| utility.get(0, &[a, b], 0);
    for a in 0..m {
        for b in 0..m {
            if g(a, b) != utility.get(1, &[b, a], 0) {
                return Err(Error::Precondition(format!(
                    "utility is not label-symmetric at ({}, {})",
                    space.outcomes().label(a),
                    space.outcomes().label(b)
                )));
            }
        }
    }
    let low = space.outcomes().min_index();
    let anti = |a: usize, b: usize| g(a, b) - g(b, a);
    for a in 0..m {
        for b in 0..m {
            let cycle_sum = anti(a, b) + anti(b, low) + anti(low, a);
            if !cycle_sum.is_zero() {
                return Ok(LanzaniDecomposition::Infeasible {
                    triple: [a, b, low],
                    cycle_sum,
                });
            }
        }
    }
    let u: Vec<Rational> = (0..m).map(|a| g(low, low) + anti(a, low)).collect();
    let h = (0..m * m).map(|i| g(i / m, i % m) - &u[i / m]).collect();
    Ok(LanzaniDecomposition::Decomposed { u, h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::valuation::bell_utility;

    fn thirds(outcomes: &OutcomeSpace, support: [i64; 3]) -> Vec<Rational> {
        (0..outcomes.len())
            .map(|i| {
                if support.iter().any(|&s| outcomes.value(i) == &int(s)) {
                    rat(1, 3)
                } else {
                    int(0)
                }
            })
            .collect()
    }

    fn example_one() -> LotterySet {
        let outcomes = OutcomeSpace::integers(&[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        let entries = vec![
            ("a".to_string(), thirds(&outcomes, [2, 4, 9])),
            ("b".to_string(), thirds(&outcomes, [1, 6, 8])),
            ("c".to_string(), thirds(&outcomes, [3, 5, 7])),
        ];
        LotterySet::new(outcomes, entries).unwrap()
    }

    #[test]
    fn pairwise_indicator_projection_cycles() {
        let set = example_one();
        let win = strict_win_utility(set.outcomes()).unwrap();
        let mut assignment = MenuAssignment::new(set);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assignment
                .assign_independent(Menu::pair(i, j).unwrap(), win.clone())
                .unwrap();
        }
        assert_eq!(
            assignment.values(&Menu::pair(0, 1).unwrap()).unwrap(),
            vec![rat(5, 9), rat(4, 9)]
        );
        assert_eq!(
            menu_choice(&assignment, &Menu::pair(0, 1).unwrap()).unwrap(),
            vec![0]
        );
        assert_eq!(
            menu_choice(&assignment, &Menu::new(vec![2]).unwrap()).unwrap(),
            vec![2]
        );
        let rel = revealed_relation(3, |m| menu_choice(&assignment, m)).unwrap();
        assert_eq!(rel.verdict(0, 1), Verdict::StrictlyPrefersLeft);
        assert_eq!(rel.verdict(1, 2), Verdict::StrictlyPrefersLeft);
        assert_eq!(rel.verdict(2, 0), Verdict::StrictlyPrefersLeft);
        assert!(matches!(
            menu_choice(&assignment, &Menu::new(vec![0, 1, 2]).unwrap()),
            Err(Error::MissingAssignment(_))
        ));
    }

    #[test]
    fn assignments_must_reproduce_lotteries() {
        let set = example_one();
        let win = strict_win_utility(set.outcomes()).unwrap();
        let wrong = set
            .independent_coupling(&Menu::pair(0, 2).unwrap())
            .unwrap();
        let mut assignment = MenuAssignment::new(set);
        let err = assignment.assign(
            Menu::pair(0, 1).unwrap(),
            MenuModel {
                utility: win,
                coupling: wrong,
            },
        );
        assert!(err.is_err());
    }

    #[test]
    fn full_set_chooser_satisfies_sen() {
        let record =
            ChoiceRecord::from_chooser(4, |m| Ok(m.items().to_vec()), Execution::Sequential)
                .unwrap();
        let report = sen_check(&record).unwrap();
        assert!(report.alpha_holds() && report.beta_holds());
        let mut partial = ChoiceRecord::new(2).unwrap();
        partial.insert(&Menu::new(vec![0]).unwrap(), &[0]).unwrap();
        assert!(sen_check(&partial).is_err());
    }

    #[test]
    fn beta_violation_is_found() {
        // {0,1} -> both, {0,1,2} -> {0}: 1 dropped although 0 survives.
        let record = ChoiceRecord::from_chooser(
            3,
            |m| {
                Ok(if m.len() == 3 {
                    vec![0]
                } else {
                    m.items().to_vec()
                })
            },
            Execution::Sequential,
        )
        .unwrap();
        let report = sen_check(&record).unwrap();
        assert!(report.alpha_holds());
        let beta = report.beta.unwrap();
        assert_eq!(
            (
                beta.smaller.items(),
                beta.larger.items(),
                beta.item,
                beta.partner
            ),
            (&[0, 1][..], &[0, 1, 2][..], 0, Some(1))
        );
    }

    #[test]
    fn symmetric_split_of_realized_outcome() {
        let outcomes = OutcomeSpace::integers(&[0, 1, 2]).unwrap();
        let space = ProblemSpace::without_covariates(2, outcomes.clone()).unwrap();
        let u = UtilityTable::from_values_fn(&space, |d, v| v[d].clone());
        match lanzani_decompose(&u).unwrap() {
            LanzaniDecomposition::Decomposed { u, h } => {
                assert_eq!(u, vec![int(0), int(1), int(2)]);
                assert!(h.iter().all(|v| v.is_zero()));
            }
            other => panic!("unexpected {other:?}"),
        }
        let win = strict_win_utility(&outcomes).unwrap();
        assert!(matches!(
            lanzani_decompose(&win).unwrap(),
            LanzaniDecomposition::Infeasible { .. }
        ));
        let money = OutcomeSpace::integers(&[0, 3000, 4000]).unwrap();
        let bell =
            bell_utility(&ProblemSpace::without_covariates(2, money).unwrap(), 0.003).unwrap();
        assert!(matches!(
            lanzani_decompose(&bell).unwrap(),
            LanzaniDecomposition::Infeasible { .. }
        ));
        let lopsided = UtilityTable::from_fn(&space, |d, _, _| int(d as i64));
        assert!(lanzani_decompose(&lopsided).is_err());
    }
}
