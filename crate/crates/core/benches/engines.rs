//! Engine comparison: union-find vs. scanning BFS, one thread vs. a pool,
//! on the orbit censuses that dominate real runs.

use criterion::{criterion_group, criterion_main, Criterion};

use bigcell::fliporbits::{count_orbits, OrbitEngine, OrbitOptions};
use bigcell::signs::{covering_components, gamma_components};

fn opts(engine: OrbitEngine, threads: usize) -> OrbitOptions {
    OrbitOptions { engine, threads, ..Default::default() }
}

fn census_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    for k in [5u8, 6] {
        group.bench_function(format!("k{k}/uf"), |b| {
            b.iter(|| count_orbits(k, &opts(OrbitEngine::UnionFind, 1)).unwrap())
        });
        group.bench_function(format!("k{k}/bfs-seq"), |b| {
            b.iter(|| count_orbits(k, &opts(OrbitEngine::BfsScan, 1)).unwrap())
        });
        group.bench_function(format!("k{k}/bfs-pool"), |b| {
            b.iter(|| count_orbits(k, &opts(OrbitEngine::BfsScan, 0)).unwrap())
        });
    }
    group.finish();
}

fn route_benches(c: &mut Criterion) {
    let mut group = c.benchmark_group("routes");
    group.bench_function("gamma/n5", |b| {
        b.iter(|| gamma_components(5, &opts(OrbitEngine::BfsScan, 1)).unwrap())
    });
    group.bench_function("covering/n4", |b| {
        b.iter(|| covering_components(4, false, &opts(OrbitEngine::BfsScan, 1)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, census_benches, route_benches);
criterion_main!(benches);
