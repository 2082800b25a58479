//! Sequential against rayon execution for the Monte Carlo ensemble and the chaos scan.
//!
//! Without the `parallel` feature both variants run the sequential loop.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ratecorr::analysis::chaos_scan;
use ratecorr::simulator::run;
use ratecorr::{Execution, NetworkParams, NoiseSpec, Order, SimConfig, TopologySpec};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    for trials in [256, 2048] {
        let cfg = SimConfig::new(
            TopologySpec::circular_ladder(5).unwrap(),
            NetworkParams::table1(),
            NoiseSpec::table1([0.01, 0.1, 0.1, 0.0, 0.0]),
            10.0,
            trials,
            1,
            Order::Exact,
        );
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, trials), &cfg, |b, cfg| b.iter(|| black_box(run(cfg, exec).unwrap())));
        }
    }
    group.finish();
}

fn chaos(c: &mut Criterion) {
    let mut group = c.benchmark_group("chaos_scan");
    let p = NetworkParams::table1();
    for n in [100, 1000] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| black_box(chaos_scan(n, 1..=n / 2, 1.0, &p, [0.1, 0.1, 0.1], exec).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, ensemble, chaos);
criterion_main!(benches);
