use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use potpi_core::leveltrees::{build_t0, is_uniformly_acyclic, LevelGraph};
use potpi_core::testgen::{build_test, generate_tree};

fn find_cycle(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_cycle");
    let table = build_test(14).unwrap();
    let tree = generate_tree(&table, 14).unwrap();
    for p in [8usize, 11, 14] {
        let graph = tree.level_graph(p).unwrap();
        group.bench_with_input(BenchmarkId::new("generated_level", p), &graph, |b, g| {
            b.iter(|| black_box(g).find_cycle())
        });
    }
    // a long path closed into one cycle: the search has to walk all of it
    let n = 1 << 12;
    let ring = LevelGraph::new(0..n, (0..n).map(|v| (v, (v + 1) % n)));
    group.bench_function("ring/4096", |b| b.iter(|| black_box(&ring).find_cycle()));
    group.finish();
}

fn uniform(c: &mut Criterion) {
    let off = build_t0(10).without_diagonal();
    c.bench_function("is_uniformly_acyclic/t0/10", |b| {
        b.iter(|| is_uniformly_acyclic(black_box(&off), 10).unwrap())
    });
}

criterion_group!(benches, find_cycle, uniform);
criterion_main!(benches);
