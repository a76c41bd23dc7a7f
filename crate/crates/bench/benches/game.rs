use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use forecast_game::{
    calibration_series, martingale_diagnostic, Execution, Game, ProbabilityGrid, RngStream,
    StreamTag,
};
use forecast_game_bench::{iid_config, simultaneous_config};

fn bench_replication(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_replication");
    for rounds in [1_000u32, 100_000] {
        group.throughput(Throughput::Elements(rounds as u64));
        let iid = Game::new(iid_config(rounds, 1)).unwrap();
        group.bench_with_input(BenchmarkId::new("iid", rounds), &iid, |b, g| {
            b.iter(|| g.run_replication(black_box(0)).unwrap())
        });
        let sim = Game::new(simultaneous_config(rounds, 1)).unwrap();
        group.bench_with_input(BenchmarkId::new("simultaneous", rounds), &sim, |b, g| {
            b.iter(|| g.run_replication(black_box(0)).unwrap())
        });
    }
    group.finish();
}

fn bench_experiment(c: &mut Criterion) {
    let game = Game::new(iid_config(10_000, 32)).unwrap();
    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(20);
    group.bench_function("serial", |b| {
        b.iter(|| game.run_experiment(Execution::Serial).unwrap())
    });
    group.bench_function("parallel", |b| {
        b.iter(|| game.run_experiment(Execution::Parallel).unwrap())
    });
    group.finish();
}

fn bench_statistics(c: &mut Criterion) {
    let game = Game::new(iid_config(100_000, 1)).unwrap();
    let trace = game.run_replication(0).unwrap();
    let alpha = game.config().assessed_alpha;
    c.bench_function("calibration_series_1e5", |b| {
        b.iter(|| calibration_series(black_box(&trace), alpha))
    });
    c.bench_function("martingale_diagnostic_1e5", |b| {
        b.iter(|| martingale_diagnostic(black_box(&trace)))
    });
}

fn bench_primitives(c: &mut Criterion) {
    let grid = ProbabilityGrid::new(101).unwrap();
    c.bench_function("snap_to_grid", |b| {
        b.iter(|| grid.snap(black_box(0.337)).unwrap())
    });
    c.bench_function("rng_stream_keyed_draw", |b| {
        let mut t = 0u32;
        b.iter(|| {
            t = t.wrapping_add(1);
            RngStream::new(1, 2, t, StreamTag::Outcome).uniform()
        })
    });
}

criterion_group!(
    benches,
    bench_replication,
    bench_experiment,
    bench_statistics,
    bench_primitives
);
criterion_main!(benches);
