use std::collections::BTreeMap;

use super::{
    ContextIndependence, ContextSetup, Expected, IndependenceSpec, ProjectionSetup, Scenario,
};
use crate::model::{OutcomeSpace, ProblemSpace, State, UtilityTable};
use crate::projection::{LotterySet, Menu};
use crate::rational::{int, parse_rational, rat};
use crate::{Error, Rational, Result};

const NAMES: [&str; 8] = [
    "russian-roulette",
    "allais-binary",
    "allais-four",
    "rps-cycle",
    "context-menu",
    "sawant",
    "gm-extension",
    "independence-violation",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

pub fn builtin(name: &str) -> Result<Scenario> {
    let s = match name {
        "russian-roulette" => russian_roulette()?,
        "allais-binary" => allais_binary()?,
        "allais-four" => allais_four()?,
        "rps-cycle" => rps_cycle()?,
        "context-menu" => context_menu()?,
        "sawant" => sawant()?,
        "gm-extension" => gm_extension()?,
        "independence-violation" => independence_violation()?,
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    s.validate()?;
    Ok(s)
}

fn exact(v: Rational) -> Expected {
    Expected::Exact(v)
}

fn text(t: &str) -> Expected {
    Expected::Text(t.to_string())
}

fn approx(v: &str) -> Expected {
    Expected::Approx {
        value: parse_rational(v).expect("literal"),
        tolerance: rat(1, 10),
    }
}

fn interval(lo: Rational, hi: Rational) -> Expected {
    Expected::Interval(lo, hi)
}

fn binary_space() -> Result<std::sync::Arc<ProblemSpace>> {
    ProblemSpace::without_covariates(2, OutcomeSpace::integers(&[0, 1])?)
}

/// Survival is 1; the driver values saving the patient spared by chance.
fn gm_utility(space: &std::sync::Arc<ProblemSpace>) -> UtilityTable {
    UtilityTable::from_fn(space, |d, y, _| match (d, y[0], y[1]) {
        (0, 1, 0) => int(1),
        (1, 0, 1) => rat(1, 2),
        _ => int(0),
    })
}

fn roulette_state(space: &std::sync::Arc<ProblemSpace>) -> Result<State> {
    State::independent(
        space,
        &[vec![rat(1, 6), rat(5, 6)], vec![rat(1, 7), rat(6, 7)]],
        0,
    )
}

fn russian_roulette() -> Result<Scenario> {
    let space = binary_space()?;
    let mut s = Scenario::new("russian-roulette", space.clone());
    s.states.insert("default".into(), roulette_state(&space)?);
    s.utilities.insert("gm".into(), gm_utility(&space));
    s.expect("evaluate.value[0]", exact(rat(5, 42)));
    s.expect("evaluate.value[1]", exact(rat(1, 14)));
    s.expect("evaluate.diff", exact(rat(-1, 21)));
    s.expect("evaluate.ranking", text("0 > 1"));
    s.expect("bounds.bounds[1]", interval(rat(1, 84), rat(1, 12)));
    s.expect("decompose.additive", Expected::Flag(false));
    s.expect("decompose.standard", Expected::Flag(false));
    s.expect("axioms.completeness", Expected::Flag(true));
    s.expect("axioms.transitivity-transitive", Expected::Flag(true));
    s.expect("axioms.independence", Expected::Flag(true));
    Ok(s)
}

fn gm_extension() -> Result<Scenario> {
    let space = binary_space()?;
    let mut s = Scenario::new("gm-extension", space.clone());
    s.states.insert("default".into(), roulette_state(&space)?);
    s.utilities.insert("gm".into(), gm_utility(&space));
    s.expect("extend.asymmetric", exact(rat(1, 2)));
    s.expect("extend.product", exact(rat(-1, 21)));
    s.expect("extend.ambiguity", Expected::Flag(true));
    s.expect("extend.mean-invariant", Expected::Flag(true));
    s.expect("extend.crossing-product", Expected::Flag(true));
    s.expect("extend.phi0(0)", exact(int(0)));
    s.expect("extend.phi0(1/2)", exact(rat(2, 3)));
    s.expect("extend.phi0(1)", exact(int(1)));
    s.expect("extend.equivalence-mismatches", exact(int(0)));
    s.expect("extend.phi0-monotone", Expected::Flag(true));
    Ok(s)
}

fn money() -> Result<OutcomeSpace> {
    OutcomeSpace::integers(&[0, 3000, 4000])
}

fn allais_binary() -> Result<Scenario> {
    let space = ProblemSpace::without_covariates(2, money()?)?;
    let mut s = Scenario::new("allais-binary", space.clone());
    // Outcome indices: 0 → 0, 1 → 3000, 2 → 4000.
    let p1 = State::new(
        &space,
        [(vec![2, 1], 0, rat(4, 5)), (vec![0, 1], 0, rat(1, 5))],
    )?;
    let p2 = State::new(
        &space,
        [
            (vec![2, 1], 0, rat(1, 20)),
            (vec![2, 0], 0, rat(3, 20)),
            (vec![0, 1], 0, rat(1, 5)),
            (vec![0, 0], 0, rat(3, 5)),
        ],
    )?;
    s.states.insert("P1".into(), p1);
    s.states.insert("P2".into(), p2);
    s.set_lambda("0.003")?;
    s.expect("evaluate.value[P1,1]", approx("2984.9315"));
    s.expect("evaluate.value[P1,0]", approx("1580.3434"));
    s.expect("evaluate.value[P2,0]", approx("-820.2193"));
    s.expect("evaluate.value[P2,1]", approx("-23663.8230"));
    s.expect("evaluate.ranking", text("P1:1 > P1:0 > P2:0 > P2:1"));
    Ok(s)
}

fn allais_four() -> Result<Scenario> {
    let space = ProblemSpace::without_covariates(4, money()?)?;
    let mut s = Scenario::new("allais-four", space.clone());
    s.decision_labels = ["a1", "b1", "a2", "b2"].map(String::from).to_vec();
    let marginals = [
        vec![rat(1, 5), int(0), rat(4, 5)],
        vec![int(0), int(1), int(0)],
        vec![rat(4, 5), int(0), rat(1, 5)],
        vec![rat(3, 4), rat(1, 4), int(0)],
    ];
    s.states
        .insert("default".into(), State::independent(&space, &marginals, 0)?);
    s.set_lambda("0.002")?;
    s.expect("evaluate.value[a1]", approx("2982.2987"));
    s.expect("evaluate.value[b1]", approx("2995.3566"));
    s.expect("evaluate.value[a2]", approx("-1509.1958"));
    s.expect("evaluate.value[b2]", approx("-1788.1380"));
    s.expect("evaluate.ranking", text("b1 > a1 > a2 > b2"));
    Ok(s)
}

/// Uniform lottery on the listed outcome values.
fn uniform_on(outcomes: &OutcomeSpace, support: &[i64]) -> Vec<Rational> {
    let w = rat(1, support.len() as i64);
    (0..outcomes.len())
        .map(|i| {
            if support.iter().any(|&v| outcomes.value(i) == &int(v)) {
                w.clone()
            } else {
                int(0)
            }
        })
        .collect()
}

fn lotteries(outcomes: &OutcomeSpace, entries: Vec<(&str, Vec<Rational>)>) -> Result<LotterySet> {
    LotterySet::new(
        outcomes.clone(),
        entries
            .into_iter()
            .map(|(l, p)| (l.to_string(), p))
            .collect(),
    )
}

/// State of the top-level space coupling all lotteries independently.
fn independent_of(space: &std::sync::Arc<ProblemSpace>, set: &LotterySet) -> Result<State> {
    let marginals: Vec<Vec<Rational>> = (0..set.len()).map(|i| set.lottery(i).to_vec()).collect();
    State::independent(space, &marginals, 0)
}

fn rps_cycle() -> Result<Scenario> {
    let outcomes = OutcomeSpace::integers(&[1, 2, 3, 4, 5, 6, 7, 8, 9])?;
    let set = lotteries(
        &outcomes,
        vec![
            ("a", uniform_on(&outcomes, &[2, 4, 9])),
            ("b", uniform_on(&outcomes, &[1, 6, 8])),
            ("c", uniform_on(&outcomes, &[3, 5, 7])),
        ],
    )?;
    let space = ProblemSpace::without_covariates(3, outcomes)?;
    let mut s = Scenario::new("rps-cycle", space.clone());
    s.decision_labels = ["a", "b", "c"].map(String::from).to_vec();
    s.states
        .insert("default".into(), independent_of(&space, &set)?);
    // Wins against the next item in index order count double for a.
    let full = UtilityTable::from_values_fn(&space, |d, v| {
        let others: Vec<usize> = (0..3).filter(|&e| e != d).collect();
        let win = |e: usize| if v[d] > v[e] { int(1) } else { int(0) };
        (if d == 0 { int(2) } else { int(1) }) * win(others[0]) + win(others[1])
    });
    s.projection = Some(ProjectionSetup {
        lotteries: set,
        pairwise_win: true,
        menus: vec![(Menu::new(vec![0, 1, 2])?, full)],
        contexts: Vec::new(),
    });
    for (w, l, pair) in [("a", "b", "a,b"), ("b", "c", "b,c"), ("c", "a", "a,c")] {
        s.expect(&format!("project.value[{w}|{pair}]"), exact(rat(5, 9)));
        s.expect(&format!("project.value[{l}|{pair}]"), exact(rat(4, 9)));
    }
    s.expect("project.revealed-transitive", Expected::Flag(false));
    s.expect("project.revealed-cycle", text("a,b,c"));
    s.expect("project.choice[a,c]", text("c"));
    s.expect("project.choice[a,b,c]", text("a"));
    s.expect("project.sen-alpha", Expected::Flag(false));
    s.expect("project.sen-alpha-witness", text("{a,c} in {a,b,c}: a"));
    s.expect(
        "project.law-ranking",
        text("a|ab ~ c|ac ~ b|bc > b|ab ~ a|ac ~ c|bc"),
    );
    s.expect("project.law-transitive", Expected::Flag(true));
    Ok(s)
}

fn context_menu() -> Result<Scenario> {
    let outcomes = OutcomeSpace::integers(&[0, 1])?;
    let set = lotteries(
        &outcomes,
        vec![
            ("a", vec![int(0), int(1)]),
            ("b", vec![rat(1, 2), rat(1, 2)]),
            ("c1", vec![rat(3, 4), rat(1, 4)]),
            ("c2", vec![rat(1, 4), rat(3, 4)]),
        ],
    )?;
    let space = ProblemSpace::without_covariates(4, outcomes.clone())?;
    let mut s = Scenario::new("context-menu", space.clone());
    s.decision_labels = ["a", "b", "c1", "c2"].map(String::from).to_vec();
    s.states
        .insert("default".into(), independent_of(&space, &set)?);
    let ctx_space = ProblemSpace::without_covariates(3, outcomes)?;
    // Coordinates are (a, b, c); the constant on c only matters for the
    // independence check.
    let tilde = UtilityTable::from_values_fn(&ctx_space, |d, v| match d {
        0 => int(1) - &v[2],
        1 => v[1].clone(),
        _ => rat(5, 8),
    });
    let bar = UtilityTable::from_values_fn(&ctx_space, |d, v| match d {
        0 => int(2) + &v[2],
        1 => v[1].clone(),
        _ => rat(5, 8),
    });
    let utilities: BTreeMap<String, UtilityTable> =
        [("bar".to_string(), bar), ("tilde".to_string(), tilde)]
            .into_iter()
            .collect();
    let context = |name: &str, c: usize, independence| -> Result<ContextSetup> {
        Ok(ContextSetup {
            name: name.into(),
            items: Menu::new(vec![0, 1, c])?,
            utilities: utilities.clone(),
            independence,
        })
    };
    let d1_check = ContextIndependence {
        utility: "tilde".into(),
        left: 0,
        right: 2,
        common: 2,
        alpha: rat(1, 3),
    };
    s.projection = Some(ProjectionSetup {
        lotteries: set,
        pairwise_win: false,
        menus: Vec::new(),
        contexts: vec![context("D1", 2, Some(d1_check))?, context("D2", 3, None)?],
    });
    s.expect("project.value[D1,tilde,a]", exact(rat(3, 4)));
    s.expect("project.value[D1,tilde,b]", exact(rat(1, 2)));
    s.expect("project.value[D1,tilde,c1]", exact(rat(5, 8)));
    s.expect("project.value[D2,tilde,a]", exact(rat(1, 4)));
    s.expect("project.value[D2,tilde,b]", exact(rat(1, 2)));
    s.expect("project.choice[D1,tilde,a,b]", text("a"));
    s.expect("project.choice[D2,tilde,a,b]", text("b"));
    s.expect("project.choice[D1,tilde,a,c1]", text("a"));
    s.expect("project.choice[D1,tilde,b,c1]", text("c1"));
    s.expect("project.context-flip[tilde,a,b]", Expected::Flag(true));
    s.expect("project.context-flip[bar,a,b]", Expected::Flag(false));
    s.expect(
        "project.contrast-bounds[D1,bar,a,b]",
        interval(rat(7, 4), rat(7, 4)),
    );
    s.expect("project.coupling-robust[D1,bar,a,b]", Expected::Flag(true));
    s.expect("project.coupling-robust[D2,bar,a,b]", Expected::Flag(true));
    s.expect(
        "project.lottery-independence[D1,tilde]",
        Expected::Flag(false),
    );
    s.expect("project.law-independence[D1,tilde]", Expected::Flag(true));
    s.expect("project.law-independence-mixed[D1,tilde]", exact(rat(2, 3)));
    Ok(s)
}

fn sawant() -> Result<Scenario> {
    let outcomes = OutcomeSpace::integers(&[1, 2, 3, 4, 5, 6])?;
    let at = |pairs: &[(i64, Rational)]| -> Vec<Rational> {
        (0..outcomes.len())
            .map(|i| {
                pairs
                    .iter()
                    .find(|(v, _)| outcomes.value(i) == &int(*v))
                    .map(|(_, p)| p.clone())
                    .unwrap_or_else(|| int(0))
            })
            .collect()
    };
    let set = lotteries(
        &outcomes,
        vec![
            ("a", at(&[(1, rat(1, 6)), (4, rat(5, 6))])),
            ("b", at(&[(2, rat(1, 2)), (5, rat(1, 2))])),
            ("c", at(&[(3, rat(5, 6)), (6, rat(1, 6))])),
        ],
    )?;
    let space = ProblemSpace::without_covariates(3, outcomes)?;
    let mut s = Scenario::new("sawant", space.clone());
    s.decision_labels = ["a", "b", "c"].map(String::from).to_vec();
    s.states
        .insert("default".into(), independent_of(&space, &set)?);
    s.comparisons = vec![(1, 0), (0, 2), (2, 1)];
    s.projection = Some(ProjectionSetup {
        lotteries: set,
        pairwise_win: true,
        menus: Vec::new(),
        contexts: Vec::new(),
    });
    s.expect("bounds.signed[b,a]", interval(int(0), rat(1, 3)));
    s.expect("bounds.signed[a,c]", interval(rat(1, 3), rat(2, 3)));
    s.expect("bounds.signed[c,b]", interval(int(0), rat(1, 3)));
    s.expect("bounds.pattern", text("b>=a, a>c, c>=b"));
    s.expect("bounds.relation-transitive", Expected::Flag(false));
    s.expect("project.revealed-transitive", Expected::Flag(false));
    Ok(s)
}

fn independence_violation() -> Result<Scenario> {
    let space = binary_space()?;
    let mut s = Scenario::new("independence-violation", space.clone());
    s.states
        .insert("P".into(), State::dirac(&space, &[0, 1], 0)?);
    s.states
        .insert("Q".into(), State::dirac(&space, &[1, 0], 0)?);
    s.utilities.insert("gm".into(), gm_utility(&space));
    s.independence = Some(IndependenceSpec {
        decision: 1,
        p: "P".into(),
        q: "Q".into(),
        r: "Q".into(),
        alpha: rat(2, 5),
    });
    s.expect("extend.independence-extended", Expected::Flag(false));
    s.expect("extend.independence-values", text("1/2, 0, 0, 0"));
    s.expect("extend.independence-means", text("3/5, 2/5"));
    s.expect("extend.independence-eu", Expected::Flag(true));
    s.expect("axioms.independence-check", Expected::Flag(true));
    Ok(s)
}
