use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::report::{Check, Report};
use super::{ContextSetup, ProjectionSetup, Scenario};
use crate::axioms::{
    alpha_grid, check_independence, classify_utility, continuity_witness, search_independence,
    transitivity_of_values, transitivity_scan, verify_continuity, AxiomReport, Witness,
};
use crate::extended::{
    asymmetric_extension, build_phi, check_crossing_with, check_equivalence_with,
    extension_ambiguity_demo, phi0_monotonicity, product_extension, ExtendedUtility, PhiValue,
};
use crate::identification::{bound_functional, bound_policy_ranking_with, MarginalsSpec};
use crate::model::{Law, UtilityTable};
use crate::projection::{
    context_choice, lottery_independence, menu_choice, revealed_relation, sen_check,
    strict_win_utility, ChoiceRecord, ContextModel, LanzaniDecomposition, LotterySet, Menu,
    MenuAssignment,
};
use crate::rational::{format_rational, rat};
use crate::reduction::{
    additive_decompose_with, binary_split, default_baseline, reduce_to_outcome, reduce_to_standard,
};
use crate::valuation::{decision_value, expected_utility, value};
use crate::wire::{axiom_report_json, bound_json, cell_json, decomposition_json, law_entries};
use crate::{Error, Execution, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Evaluate,
    Bounds,
    Decompose,
    Axioms,
    Project,
    Extend,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Evaluate,
        Command::Bounds,
        Command::Decompose,
        Command::Axioms,
        Command::Project,
        Command::Extend,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Evaluate => "evaluate",
            Command::Bounds => "bounds",
            Command::Decompose => "decompose",
            Command::Axioms => "axioms",
            Command::Project => "project",
            Command::Extend => "extend",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    /// Sweep step for the crossing and equivalence checks.
    pub grid_step: Rational,
    /// Overrides the scenario's regret parameter.
    pub lambda: Option<String>,
    pub exec: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            grid_step: rat(1, 16),
            lambda: None,
            exec: Execution::default(),
        }
    }
}

pub fn run(scenario: &Scenario, command: Command) -> Result<Report> {
    run_with(scenario, command, &RunOptions::default())
}

/// Runs `command` and checks the rows against the expected entries whose key
/// starts with `command.`.
pub fn run_with(scenario: &Scenario, command: Command, options: &RunOptions) -> Result<Report> {
    let mut owned;
    let scenario = match &options.lambda {
        Some(lambda) => {
            if scenario.lambda.is_none() {
                return Err(Error::InapplicableCommand {
                    scenario: scenario.name.clone(),
                    command: "--lambda (scenario has no regret utility)".into(),
                });
            }
            owned = scenario.clone();
            owned.set_lambda(lambda)?;
            &owned
        }
        None => scenario,
    };
    let mut report = Report::new(&scenario.name, command);
    let ctx = Ctx {
        s: scenario,
        opts: options,
    };
    match command {
        Command::Evaluate => ctx.evaluate(&mut report)?,
        Command::Bounds => ctx.bounds(&mut report)?,
        Command::Decompose => ctx.decompose(&mut report)?,
        Command::Axioms => ctx.axioms(&mut report)?,
        Command::Project => ctx.project(&mut report)?,
        Command::Extend => ctx.extend(&mut report)?,
    }
    let prefix = format!("{}.", command.name());
    let checks = scenario
        .expected
        .iter()
        .filter_map(|(k, e)| {
            k.strip_prefix(&prefix)
                .map(|key| Check::evaluate(key, e, report.get(key)))
        })
        .collect();
    report.checks = checks;
    Ok(report)
}

struct Ctx<'a> {
    s: &'a Scenario,
    opts: &'a RunOptions,
}

/// `name[a,b,…]`, dropping empty parts.
fn key(name: &str, parts: &[&str]) -> String {
    let parts: Vec<&str> = parts.iter().copied().filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        name.to_string()
    } else {
        format!("{name}[{}]", parts.join(","))
    }
}

fn braces(labels: &[String]) -> String {
    format!("{{{}}}", labels.join(","))
}

/// Descending order with `~` between ties; input order breaks ties.
fn ranking(items: &[(String, Rational)]) -> String {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].1.cmp(&items[a].1));
    let mut out = String::new();
    for (n, &i) in order.iter().enumerate() {
        if n > 0 {
            let tie = items[order[n - 1]].1 == items[i].1;
            out.push_str(if tie { " ~ " } else { " > " });
        }
        out.push_str(&items[i].0);
    }
    out
}

fn list(values: &[Rational]) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(", ")
}

fn inapplicable(s: &Scenario, command: Command, why: &str) -> Error {
    Error::InapplicableCommand {
        scenario: s.name.clone(),
        command: format!("{} ({why})", command.name()),
    }
}

/// Sign of `y_i − y_j` by outcome value, as the win functional.
fn signed_win(space: &crate::model::ProblemSpace, profile: usize, i: usize, j: usize) -> Rational {
    let v = |k| space.outcomes().value(space.digit(profile, k));
    match v(i).cmp(v(j)) {
        std::cmp::Ordering::Greater => Rational::one(),
        std::cmp::Ordering::Less => -Rational::one(),
        std::cmp::Ordering::Equal => Rational::zero(),
    }
}

impl Ctx<'_> {
    fn utility_tag<'b>(&self, name: &'b str) -> &'b str {
        if self.s.utilities.len() > 1 {
            name
        } else {
            ""
        }
    }

    fn state_tag<'b>(&self, name: &'b str) -> &'b str {
        if self.s.states.len() > 1 {
            name
        } else {
            ""
        }
    }

    fn label(&self, d: usize) -> String {
        self.s.decision_label(d)
    }

    fn require_utilities(&self, command: Command) -> Result<()> {
        if self.s.utilities.is_empty() {
            return Err(inapplicable(self.s, command, "scenario has no utility"));
        }
        Ok(())
    }

    fn evaluate(&self, report: &mut Report) -> Result<()> {
        self.require_utilities(Command::Evaluate)?;
        let k = self.s.space.decisions();
        for (uname, u) in &self.s.utilities {
            let ut = self.utility_tag(uname);
            let mut ranked = Vec::new();
            for (sname, state) in &self.s.states {
                let st = self.state_tag(sname);
                let values = (0..k)
                    .map(|d| decision_value(d, state, u))
                    .collect::<Result<Vec<_>>>()?;
                for (d, v) in values.iter().enumerate() {
                    report.exact(key("value", &[ut, st, &self.label(d)]), v.clone());
                    let item = if st.is_empty() {
                        self.label(d)
                    } else {
                        format!("{st}:{}", self.label(d))
                    };
                    ranked.push((item, v.clone()));
                }
                if k == 2 {
                    report.exact(key("diff", &[ut, st]), &values[1] - &values[0]);
                }
                for (pname, policy) in &self.s.policies {
                    let v = value(policy, state, u)?;
                    report.exact(key("policy", &[ut, st, pname]), v);
                }
            }
            report.text(key("ranking", &[ut]), ranking(&ranked));
        }
        Ok(())
    }

    fn bounds(&self, report: &mut Report) -> Result<()> {
        if self.s.utilities.is_empty() && self.s.comparisons.is_empty() {
            return Err(inapplicable(self.s, Command::Bounds, "nothing to bound"));
        }
        let space = &self.s.space;
        let k = space.decisions();
        for (sname, state) in &self.s.states {
            let st = self.state_tag(sname);
            let spec = MarginalsSpec::of_state(state)?;
            for (uname, u) in &self.s.utilities {
                let ut = self.utility_tag(uname);
                let ranking = bound_policy_ranking_with(&spec, u, self.opts.exec)?;
                for (d, b) in ranking.bounds.iter().enumerate() {
                    let kk = key("bounds", &[ut, st, &self.label(d)]);
                    report.interval(kk.clone(), b.lower.clone(), b.upper.clone());
                    report.detail(kk, bound_json(b));
                }
                let dominant = ranking
                    .dominant
                    .iter()
                    .map(|&d| self.label(d))
                    .collect::<Vec<_>>();
                report.text(
                    key("dominant", &[ut, st]),
                    if dominant.is_empty() {
                        "none".to_string()
                    } else {
                        dominant.join(",")
                    },
                );
                if k == 2 {
                    let x = spec.covariate();
                    let b = bound_functional(&spec, |p| u.at(1, p, x) - u.at(0, p, x))?;
                    let kk = key("bounds-diff", &[ut, st]);
                    report.interval(kk.clone(), b.lower.clone(), b.upper.clone());
                    report.detail(kk, bound_json(&b));
                }
            }
            if self.s.comparisons.is_empty() {
                continue;
            }
            // Lower bound of every ordered signed comparison; i ≿ j when it is ≥ 0.
            let mut lower = vec![Rational::zero(); k * k];
            for i in 0..k {
                for j in (0..k).filter(|&j| j != i) {
                    let b = bound_functional(&spec, |p| signed_win(space, p, i, j))?;
                    lower[i * k + j] = b.lower.clone();
                    if self.s.comparisons.contains(&(i, j)) {
                        let kk = key("signed", &[st, &self.label(i), &self.label(j)]);
                        report.interval(kk.clone(), b.lower.clone(), b.upper.clone());
                        report.detail(kk, bound_json(&b));
                    }
                }
            }
            let pattern = self
                .s
                .comparisons
                .iter()
                .map(|&(i, j)| {
                    let l = &lower[i * k + j];
                    let rel = if l.is_positive() {
                        ">"
                    } else if l.is_zero() {
                        ">="
                    } else {
                        "?"
                    };
                    format!("{}{rel}{}", self.label(i), self.label(j))
                })
                .collect::<Vec<_>>()
                .join(", ");
            report.text(key("pattern", &[st]), pattern);
            let t = transitivity_scan(k, |i, j| !lower[i * k + j].is_negative(), self.opts.exec);
            self.cycle_rows(report, &key("relation", &[st]), &t, |i| self.label(i));
        }
        Ok(())
    }

    fn cycle_rows(
        &self,
        report: &mut Report,
        base: &str,
        t: &AxiomReport,
        label: impl Fn(usize) -> String,
    ) {
        report.flag(format!("{base}-transitive"), t.holds);
        if let Some(Witness::Cycle(c)) = &t.witness {
            report.text(
                format!("{base}-cycle"),
                c.iter().map(|&i| label(i)).collect::<Vec<_>>().join(","),
            );
        }
    }

    fn decompose(&self, report: &mut Report) -> Result<()> {
        self.require_utilities(Command::Decompose)?;
        let space = &self.s.space;
        for (uname, u) in &self.s.utilities {
            let ut = self.utility_tag(uname);
            let dec = additive_decompose_with(u, &default_baseline(space), self.opts.exec)?;
            report.exact(key("residual", &[ut]), dec.residual.clone());
            report.flag(key("additive", &[ut]), dec.is_additive());
            report.detail(key("additive", &[ut]), decomposition_json(&dec));
            let standard = reduce_to_standard(u);
            report.flag(key("standard", &[ut]), standard.reduced().is_some());
            if let Some(c) = standard.conflict() {
                report.detail(
                    key("standard", &[ut]),
                    json!({ "first": cell_json(space, &c.first), "second": cell_json(space, &c.second) }),
                );
            }
            report.flag(
                key("outcome", &[ut]),
                reduce_to_outcome(u).reduced().is_some(),
            );
            if space.decisions() == 2 {
                let split = binary_split(u, &default_baseline(space))?;
                report.flag(key("binary-split", &[ut]), split.exact);
                let lanzani = match crate::projection::lanzani_decompose(u) {
                    Ok(LanzaniDecomposition::Decomposed { .. }) => "decomposed".to_string(),
                    Ok(LanzaniDecomposition::Infeasible { triple, cycle_sum }) => format!(
                        "infeasible at ({}) with cycle sum {}",
                        triple
                            .iter()
                            .map(|&a| space.outcomes().label(a))
                            .collect::<Vec<_>>()
                            .join(","),
                        format_rational(&cycle_sum)
                    ),
                    Err(_) => "not applicable".to_string(),
                };
                report.text(key("lanzani", &[ut]), lanzani);
            }
        }
        Ok(())
    }

    /// `δ_d × state` for every state and decision, with display labels.
    fn deterministic_laws(&self) -> Result<Vec<(String, Law)>> {
        let mut out = Vec::new();
        for (sname, state) in &self.s.states {
            for d in 0..self.s.space.decisions() {
                let st = self.state_tag(sname);
                let label = if st.is_empty() {
                    self.label(d)
                } else {
                    format!("{st}:{}", self.label(d))
                };
                out.push((label, Law::deterministic(d, state)?));
            }
        }
        Ok(out)
    }

    fn axioms(&self, report: &mut Report) -> Result<()> {
        self.require_utilities(Command::Axioms)?;
        let laws = self.deterministic_laws()?;
        let family: Vec<Law> = laws.iter().map(|(_, l)| l.clone()).collect();
        report.flag("completeness", AxiomReport::completeness_of_values().holds);
        for (uname, u) in &self.s.utilities {
            let ut = self.utility_tag(uname);
            let classes = classify_utility(u).names();
            report.text(
                key("classes", &[ut]),
                if classes.is_empty() {
                    "none".into()
                } else {
                    classes.join(",")
                },
            );
            let eu = |l: &Law| expected_utility(l, u);
            let t = transitivity_of_values(&family, eu, self.opts.exec)?;
            self.cycle_rows(report, &key("transitivity", &[ut]), &t, |i| {
                laws[i].0.clone()
            });
            let ind = search_independence(&family, &alpha_grid(8), eu, self.opts.exec)?;
            report.flag(key("independence", &[ut]), ind.holds);
            report.detail(key("independence", &[ut]), axiom_report_json(&ind));
            let values = family.iter().map(eu).collect::<Result<Vec<_>>>()?;
            let n = family.len();
            let triple = (0..n * n * n)
                .map(|t| (t / (n * n), (t / n) % n, t % n))
                .find(|&(p, q, r)| values[p] > values[q] && values[q] > values[r]);
            match triple {
                Some((p, q, r)) => {
                    let w = continuity_witness(&family[p], &family[q], &family[r], u)?;
                    let ok = verify_continuity(&family[p], &family[q], &family[r], u, &w)?;
                    report.flag(key("continuity", &[ut]), ok);
                    report.text(
                        key("continuity-weights", &[ut]),
                        format!(
                            "alpha {}, beta {}",
                            format_rational(&w.alpha),
                            format_rational(&w.beta)
                        ),
                    );
                }
                None => report.text(key("continuity", &[ut]), "no strictly ordered triple"),
            }
            if let Some(spec) = &self.s.independence {
                let r = self.independence_instance(spec, eu)?;
                report.flag(key("independence-check", &[ut]), r.holds);
                report.detail(key("independence-check", &[ut]), axiom_report_json(&r));
            }
        }
        Ok(())
    }

    fn independence_instance(
        &self,
        spec: &super::IndependenceSpec,
        value: impl Fn(&Law) -> Result<Rational>,
    ) -> Result<AxiomReport> {
        let law = |name: &str| Law::deterministic(spec.decision, &self.s.states[name]);
        check_independence(
            &law(&spec.p)?,
            &law(&spec.q)?,
            &law(&spec.r)?,
            &spec.alpha,
            value,
        )
    }

    fn extend(&self, report: &mut Report) -> Result<()> {
        let space = &self.s.space;
        if space.decisions() != 2 || space.outcome_count() != 2 || self.s.utilities.is_empty() {
            return Err(inapplicable(
                self.s,
                Command::Extend,
                "needs two decisions, binary outcomes and a utility",
            ));
        }
        let step = &self.opts.grid_step;
        for (uname, u) in &self.s.utilities {
            let ut = self.utility_tag(uname);
            let asym = asymmetric_extension(u);
            match &asym {
                Ok(ext) => {
                    let form = ext.contrast()?;
                    let c = check_crossing_with(&form, step, self.opts.exec)?;
                    report.flag(key("crossing-asymmetric", &[ut]), c.passes());
                }
                Err(e) => report.text(key("crossing-asymmetric", &[ut]), format!("rejected: {e}")),
            }
            let prod = product_extension(u)?;
            let form = prod.contrast()?;
            let crossing = check_crossing_with(&form, step, self.opts.exec)?;
            report.flag(key("crossing-product", &[ut]), crossing.passes());
            if crossing.passes() {
                let phi = build_phi(&form)?;
                let iv = &form.interval;
                let mid = (&iv.lo + &iv.hi) / Rational::from_integer(2.into());
                for p0 in [iv.lo.clone(), mid, iv.hi.clone()] {
                    let shown = match phi.phi0(&p0) {
                        PhiValue::Exact(v) => super::Value::Exact(v),
                        PhiValue::Bracket { lo, hi } => super::Value::Interval(lo, hi),
                    };
                    report.push(
                        format!("{}({})", key("phi0", &[ut]), format_rational(&p0)),
                        shown,
                    );
                }
                let eq = check_equivalence_with(&form, &phi, step, self.opts.exec)?;
                report.exact(
                    key("equivalence-mismatches", &[ut]),
                    Rational::from_integer(eq.mismatches.into()),
                );
                report.exact(
                    key("equivalence-indeterminate", &[ut]),
                    Rational::from_integer(eq.indeterminate.into()),
                );
                report.flag(
                    key("phi0-monotone", &[ut]),
                    phi0_monotonicity(&phi, step)?.is_none(),
                );
            }
            if asym.is_err() {
                continue;
            }
            for (sname, state) in &self.s.states {
                let st = self.state_tag(sname);
                let demo = extension_ambiguity_demo(u, state)?;
                let choice =
                    |c: Option<usize>| c.map(|d| self.label(d)).unwrap_or_else(|| "tie".into());
                report.exact(
                    key("asymmetric", &[ut, st]),
                    demo.asymmetric_contrast.clone(),
                );
                report.exact(key("product", &[ut, st]), demo.product_contrast.clone());
                report.text(
                    key("choices", &[ut, st]),
                    format!(
                        "asymmetric {}, product {}",
                        choice(demo.asymmetric_choice),
                        choice(demo.product_choice)
                    ),
                );
                report.flag(key("ambiguity", &[ut, st]), demo.choices_differ());
                report.flag(key("mean-invariant", &[ut, st]), demo.invariant);
            }
            if let (Some(spec), Ok(ext)) = (&self.s.independence, &asym) {
                self.extended_independence(report, ut, spec, ext, u)?;
            }
        }
        Ok(())
    }

    fn extended_independence(
        &self,
        report: &mut Report,
        ut: &str,
        spec: &super::IndependenceSpec,
        ext: &ExtendedUtility,
        u: &UtilityTable,
    ) -> Result<()> {
        let r = self.independence_instance(spec, |l| ext.value(l))?;
        report.flag(key("independence-extended", &[ut]), r.holds);
        let (pv, qv) = {
            let law = |name: &str| Law::deterministic(spec.decision, &self.s.states[name]);
            (ext.value(&law(&spec.p)?)?, ext.value(&law(&spec.q)?)?)
        };
        if let Some(Witness::Independence {
            value_mixed_p,
            value_mixed_q,
            mixed_p,
            ..
        }) = &r.witness
        {
            report.text(
                key("independence-values", &[ut]),
                list(&[pv, qv, value_mixed_p.clone(), value_mixed_q.clone()]),
            );
            report.text(
                key("independence-means", &[ut]),
                list(&mixed_p.state_part().means()),
            );
            report.detail(
                key("independence-extended", &[ut]),
                json!({ "mixed_p": law_entries(mixed_p), "report": axiom_report_json(&r) }),
            );
        }
        let eu = self.independence_instance(spec, |l| expected_utility(l, u))?;
        report.flag(key("independence-eu", &[ut]), eu.holds);
        Ok(())
    }

    fn project(&self, report: &mut Report) -> Result<()> {
        let setup =
            self.s.projection.as_ref().ok_or_else(|| {
                inapplicable(self.s, Command::Project, "scenario has no lotteries")
            })?;
        if setup.pairwise_win || !setup.menus.is_empty() {
            self.menu_projection(report, setup)?;
        }
        self.context_projection(report, setup)
    }

    fn menu_projection(&self, report: &mut Report, setup: &ProjectionSetup) -> Result<()> {
        let set = &setup.lotteries;
        let n = set.len();
        let labels = |m: &Menu| {
            m.items()
                .iter()
                .map(|&i| set.label(i).to_string())
                .collect::<Vec<_>>()
        };
        let mut assignment = MenuAssignment::new(set.clone());
        let mut assigned: Vec<Menu> = Vec::new();
        if setup.pairwise_win {
            let win = strict_win_utility(set.outcomes())?;
            for i in 0..n {
                for j in i + 1..n {
                    let m = Menu::pair(i, j)?;
                    if !setup.menus.iter().any(|(e, _)| *e == m) {
                        assignment.assign_independent(m.clone(), win.clone())?;
                        assigned.push(m);
                    }
                }
            }
        }
        for (m, u) in &setup.menus {
            assignment.assign_independent(m.clone(), u.clone())?;
            assigned.push(m.clone());
        }
        assigned.sort();
        for m in &assigned {
            let ls = labels(m);
            let vals = assignment.values(m)?;
            for (pos, v) in vals.iter().enumerate() {
                report.exact(format!("value[{}|{}]", ls[pos], ls.join(",")), v.clone());
            }
            let chosen = menu_choice(&assignment, m)?;
            report.text(
                key("choice", &[&ls.join(",")]),
                chosen
                    .iter()
                    .map(|&i| set.label(i))
                    .collect::<Vec<_>>()
                    .join(","),
            );
        }
        let chooser = |m: &Menu| menu_choice(&assignment, m);
        let all_pairs = (0..n)
            .all(|i| (i + 1..n).all(|j| assigned.contains(&Menu::pair(i, j).expect("distinct"))));
        if all_pairs && n >= 2 {
            let rel = revealed_relation(n, chooser)?;
            let t = transitivity_scan(n, |i, j| rel.weakly_prefers(i, j), self.opts.exec);
            self.cycle_rows(report, "revealed", &t, |i| set.label(i).to_string());
        }
        let every_menu = (1u64..(1 << n)).all(|mask| {
            let m = Menu::from_mask(mask).expect("nonzero mask");
            m.len() == 1 || assigned.contains(&m)
        });
        if every_menu {
            let record = ChoiceRecord::from_chooser(n, chooser, self.opts.exec)?;
            let sen = sen_check(&record)?;
            report.flag("sen-alpha", sen.alpha_holds());
            if let Some(v) = &sen.alpha {
                report.text(
                    "sen-alpha-witness",
                    format!(
                        "{} in {}: {}",
                        braces(&labels(&v.smaller)),
                        braces(&labels(&v.larger)),
                        set.label(v.item)
                    ),
                );
            }
            report.flag("sen-beta", sen.beta_holds());
        }
        if setup.pairwise_win {
            self.pair_laws(report, set, &assignment)?;
        }
        Ok(())
    }

    /// The pairwise problems as deterministic laws on their own states.
    fn pair_laws(
        &self,
        report: &mut Report,
        set: &LotterySet,
        assignment: &MenuAssignment,
    ) -> Result<()> {
        let mut items = Vec::new();
        let mut laws = Vec::new();
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let m = Menu::pair(i, j)?;
                let model = assignment.model(&m).expect("pairs are assigned");
                for (pos, &item) in m.items().iter().enumerate() {
                    let law = Law::deterministic(pos, &model.coupling)?;
                    let v = expected_utility(&law, &model.utility)?;
                    items.push((
                        format!("{}|{}{}", set.label(item), set.label(i), set.label(j)),
                        v,
                    ));
                    laws.push((law, model.utility.clone()));
                }
            }
        }
        report.text("law-ranking", ranking(&items));
        let values: Vec<Rational> = items.iter().map(|(_, v)| v.clone()).collect();
        let t = transitivity_scan(values.len(), |a, b| values[a] >= values[b], self.opts.exec);
        report.flag("law-transitive", t.holds);
        Ok(())
    }

    fn context_projection(&self, report: &mut Report, setup: &ProjectionSetup) -> Result<()> {
        let set = &setup.lotteries;
        // (utility, pair labels) -> choices seen across contexts.
        let mut seen: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for c in &setup.contexts {
            let sub = sub_lotteries(set, c)?;
            let item_labels: Vec<String> = sub.labels().to_vec();
            for (uname, u) in &c.utilities {
                let model = ContextModel::independent(sub.clone(), u.clone())?;
                for (pos, v) in model.values().iter().enumerate() {
                    report.exact(
                        key("value", &[&c.name, uname, &item_labels[pos]]),
                        v.clone(),
                    );
                }
                let spec = MarginalsSpec::of_state(model.state())?;
                for i in 0..sub.len() {
                    for j in i + 1..sub.len() {
                        let pair = format!("{},{}", item_labels[i], item_labels[j]);
                        let chosen = context_choice(&model, &Menu::pair(i, j)?)?;
                        let chosen = chosen
                            .iter()
                            .map(|&k| item_labels[k].clone())
                            .collect::<Vec<_>>()
                            .join(",");
                        report.text(key("choice", &[&c.name, uname, &pair]), chosen.clone());
                        seen.entry((uname.clone(), pair.clone()))
                            .or_default()
                            .push(chosen);
                        let b = bound_functional(&spec, |p| u.at(i, p, 0) - u.at(j, p, 0))?;
                        let kk = key("contrast-bounds", &[&c.name, uname, &pair]);
                        report.interval(kk.clone(), b.lower.clone(), b.upper.clone());
                        report.detail(kk, bound_json(&b));
                        report.flag(
                            key("coupling-robust", &[&c.name, uname, &pair]),
                            b.lower.is_positive() || b.upper.is_negative(),
                        );
                    }
                }
                if let Some(ind) = c.independence.as_ref().filter(|ind| &ind.utility == uname) {
                    let li =
                        lottery_independence(&model, ind.left, ind.right, ind.common, &ind.alpha)?;
                    report.flag(key("lottery-independence", &[&c.name, uname]), li.holds);
                    let law = |pos: usize| Law::deterministic(pos, model.state());
                    let r = check_independence(
                        &law(ind.left)?,
                        &law(ind.right)?,
                        &law(ind.common)?,
                        &ind.alpha,
                        |l| expected_utility(l, u),
                    )?;
                    report.flag(key("law-independence", &[&c.name, uname]), r.holds);
                    let weights = [ind.alpha.clone(), Rational::one() - &ind.alpha];
                    let mixed = Law::mix(&[law(ind.left)?, law(ind.common)?], &weights)?;
                    report.exact(
                        key("law-independence-mixed", &[&c.name, uname]),
                        expected_utility(&mixed, u)?,
                    );
                }
            }
        }
        for ((uname, pair), choices) in seen {
            if choices.len() > 1 {
                let flips = choices.iter().any(|c| *c != choices[0]);
                report.flag(key("context-flip", &[&uname, &pair]), flips);
            }
        }
        Ok(())
    }
}

fn sub_lotteries(set: &LotterySet, c: &ContextSetup) -> Result<LotterySet> {
    LotterySet::new(
        set.outcomes().clone(),
        c.items
            .items()
            .iter()
            .map(|&i| (set.label(i).to_string(), set.lottery(i).to_vec()))
            .collect(),
    )
}
