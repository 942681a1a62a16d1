use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use specrec::caselab::{magr_subcase, verify_table3, CaseConfig};
use specrec::exec::Executor;
use specrec::fixtures::Fixtures;

const EXECUTORS: [(&str, Executor); 2] = [("sequential", Executor::Sequential), ("parallel", Executor::Parallel)];

fn magr_grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("magr-grid-n11-q500");
    g.sample_size(10);
    for (name, executor) in EXECUTORS {
        let cfg = CaseConfig { qmax: 500, executor, ..CaseConfig::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &cfg, |b, cfg| b.iter(|| magr_subcase(11, cfg)));
    }
    g.finish();
}

fn table3(c: &mut Criterion) {
    let fx = Fixtures::embedded().expect("embedded fixtures");
    let mut g = c.benchmark_group("table3-sigma");
    g.sample_size(10);
    for (name, executor) in EXECUTORS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &executor, |b, &e| b.iter(|| verify_table3(&fx, e)));
    }
    g.finish();
}

criterion_group!(benches, magr_grid, table3);
criterion_main!(benches);
