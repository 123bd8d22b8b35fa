use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dcc::enumerate::{enum_typed_terms_with, TermBounds};
use dcc::harness::{run_theorem_suite, SuiteBounds, Theorem};
use dcc::lattice::Lattice;
use dcc::par::Strategy;
use dcc::syntax::parse_type;
use dcc::typecheck::System;

const STRATEGIES: [Strategy; 2] = [Strategy::Sequential, Strategy::Parallel];

fn enumeration(c: &mut Criterion) {
    let lat = Lattice::two();
    let t = parse_type("T[H](unit+unit) -> unit+unit", &lat).unwrap();
    let mut group = c.benchmark_group("enumerate");
    for strategy in STRATEGIES {
        let mut bounds = TermBounds::new(&lat, System::Dcccd, 8);
        bounds.strategy = strategy;
        group.bench_with_input(BenchmarkId::from_parameter(format!("{strategy:?}")), &bounds, |b, bounds| {
            b.iter(|| enum_typed_terms_with(&lat, &t, System::Dcccd, bounds).len())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for th in [Theorem::T1, Theorem::T2] {
        for strategy in STRATEGIES {
            let bounds = SuiteBounds { term_size: 6, strategy, ..SuiteBounds::default() };
            group.bench_with_input(BenchmarkId::new(th.to_string(), format!("{strategy:?}")), &bounds, |b, bounds| {
                b.iter(|| run_theorem_suite(th, bounds).unwrap().checked)
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration, suites);
criterion_main!(benches);
