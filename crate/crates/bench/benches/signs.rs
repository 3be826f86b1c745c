use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hfsign_core::diagram::{self, GridDiagram};
use hfsign_core::homology::{differential, smith_normal_form};
use hfsign_core::signs::{solve_profile1, SignEvaluator, SignSource};
use hfsign_core::Limits;

fn solve(c: &mut Criterion) {
    let limits = Limits::default();
    let mut g = c.benchmark_group("solve_profile1");
    g.sample_size(10);
    for n in 2..=4 {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| solve_profile1(n, &limits).unwrap())
        });
    }
    g.finish();
}

fn evaluate(c: &mut Criterion) {
    let limits = Limits::default();
    let table = Arc::new(solve_profile1(5, &limits).unwrap().table);
    let ev = SignEvaluator::new(5, table).unwrap();
    let d = GridDiagram::trefoil();
    let flows: Vec<_> = diagram::generators(&d)
        .unwrap()
        .iter()
        .take(200)
        .flat_map(|x| {
            diagram::flows_from(&d, x)
                .unwrap()
                .into_iter()
                .map(|(f, _)| diagram::to_formal(&d, &f, x).unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    c.bench_function("evaluate_trefoil_flows", |b| {
        b.iter(|| flows.iter().map(|f| ev.sign(black_box(f)).unwrap().to_i64()).sum::<i64>())
    });
}

fn homology(c: &mut Criterion) {
    let ev = SignEvaluator::build(5, &Limits::default()).unwrap();
    let d = GridDiagram::trefoil();
    let mut g = c.benchmark_group("homology");
    g.sample_size(10);
    g.bench_function("differential_trefoil", |b| b.iter(|| differential(&d, &ev).unwrap()));
    let m = differential(&d, &ev).unwrap();
    g.bench_function("snf_trefoil", |b| b.iter(|| smith_normal_form(black_box(&m))));
    g.finish();
}

criterion_group!(benches, solve, evaluate, homology);
criterion_main!(benches);
