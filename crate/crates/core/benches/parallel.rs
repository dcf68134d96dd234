//! Sequential against parallel execution on the main sweeps.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cfdt::axioms::{alpha_grid, search_independence};
use cfdt::extended::{build_phi, check_equivalence_with, product_contrast};
use cfdt::model::{Law, OutcomeSpace, ProblemSpace, State, UtilityTable};
use cfdt::projection::{context_choice, ChoiceRecord, ContextModel, LotterySet};
use cfdt::rational::{int, rat};
use cfdt::reduction::{additive_decompose_with, default_baseline};
use cfdt::valuation::expected_utility;
use cfdt::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn space(k: usize, m: i64) -> std::sync::Arc<ProblemSpace> {
    ProblemSpace::without_covariates(
        k,
        OutcomeSpace::integers(&(0..m).collect::<Vec<_>>()).unwrap(),
    )
    .unwrap()
}

/// Deterministic pseudo-random table entries.
fn entry(i: usize) -> cfdt::Rational {
    rat(((i * 37 + 11) % 23) as i64 - 11, 1 + (i % 5) as i64)
}

fn independence(c: &mut Criterion) {
    let sp = space(3, 3);
    let u = UtilityTable::from_fn(&sp, |d, y, _| entry(d * 31 + sp.profile_index(y)));
    let family: Vec<Law> = (0..10)
        .map(|i| {
            let (a, b) = (i % sp.profile_count(), (i * 7 + 3) % sp.profile_count());
            Law::new(
                &sp,
                [
                    (i % 3, sp.profile(a), 0, rat(1, 3)),
                    ((i + 1) % 3, sp.profile(b), 0, rat(2, 3)),
                ],
            )
            .unwrap()
        })
        .collect();
    let alphas = alpha_grid(8);
    let mut group = c.benchmark_group("search_independence");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                search_independence(
                    black_box(&family),
                    &alphas,
                    |l| expected_utility(l, &u),
                    exec,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn equivalence(c: &mut Criterion) {
    let sp = space(2, 2);
    let gm = UtilityTable::from_fn(&sp, |d, y, _| match (d, y[0], y[1]) {
        (0, 1, 0) => int(1),
        (1, 0, 1) => rat(1, 2),
        _ => int(0),
    });
    let form = product_contrast(&gm).unwrap();
    let phi = build_phi(&form).unwrap();
    let step = rat(1, 128);
    let mut group = c.benchmark_group("check_equivalence");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| check_equivalence_with(black_box(&form), &phi, &step, exec).unwrap())
        });
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let sp = space(3, 8);
    let u = UtilityTable::from_fn(&sp, |d, y, _| entry(d * 1000 + sp.profile_index(y)));
    let base = default_baseline(&sp);
    let mut group = c.benchmark_group("additive_decompose");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| additive_decompose_with(black_box(&u), &base, exec).unwrap())
        });
    }
    group.finish();
}

fn choice_record(c: &mut Criterion) {
    let n = 10;
    let sp = space(n, 2);
    let marginals: Vec<Vec<_>> = (0..n)
        .map(|i| vec![rat(i as i64 + 1, 12), rat(11 - i as i64, 12)])
        .collect();
    let set = LotterySet::new(
        sp.outcomes().clone(),
        marginals
            .iter()
            .enumerate()
            .map(|(i, m)| (format!("l{i}"), m.clone()))
            .collect(),
    )
    .unwrap();
    let state = State::independent(&sp, &marginals, 0).unwrap();
    let u = UtilityTable::from_values_fn(&sp, |d, v| &v[d] * entry(d) + &v[(d + 1) % n]);
    let model = ContextModel::new(set, u, state).unwrap();
    let mut group = c.benchmark_group("choice_record");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                ChoiceRecord::from_chooser(n, |m| context_choice(black_box(&model), m), exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = independence, equivalence, decomposition, choice_record
}
criterion_main!(benches);
