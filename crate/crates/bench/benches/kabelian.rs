use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use kabelian_bench::fibonacci_prefix;
use kabelian_core::complexity::k_complexity;
use kabelian_core::flowgraph::{count_classes_bruteforce, count_classes_flow, Budget};
use kabelian_core::repetitions::{balance_bound, find_power, PositionSet};
use kabelian_core::{signature, K};

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for (m, k, n) in [(2, 2, 12), (2, 3, 14), (3, 2, 8)] {
        let id = format!("{m}-{k}-{n}");
        group.bench_with_input(
            BenchmarkId::new("flow", &id),
            &(m, k, n),
            |b, &(m, k, n)| b.iter(|| count_classes_flow(m, k, n, Budget::default()).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("bruteforce", &id),
            &(m, k, n),
            |b, &(m, k, n)| {
                b.iter(|| count_classes_bruteforce(m, k, n, Budget::default()).unwrap())
            },
        );
    }
    group.finish();
}

fn words(c: &mut Criterion) {
    let prefix = fibonacci_prefix(4000);
    c.bench_function("signature/k4/len4000", |b| {
        b.iter(|| signature(black_box(&prefix), K::finite(4)).unwrap())
    });
    let mut group = c.benchmark_group("k_complexity");
    for k in [1, 3, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| k_complexity(black_box(&prefix), K::finite(k), 40).unwrap())
        });
    }
    group.finish();
}

fn repetitions(c: &mut Criterion) {
    let prefix = fibonacci_prefix(600);
    c.bench_function("balance_bound/k3/len600", |b| {
        b.iter(|| balance_bound(black_box(&prefix), 3).unwrap())
    });
    c.bench_function("find_power/inf-4/len500", |b| {
        let p = prefix.prefix(500);
        b.iter(|| find_power(black_box(&p), K::INFINITE, 4, &PositionSet::All, 40).unwrap())
    });
}

criterion_group!(benches, census, words, repetitions);
criterion_main!(benches);
