use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gta_bench::{crowd, grid, urban_scatter};
use gta_core::{
    fit_scenario, mean_coverage_map, outage_map, Environment, FrequencyBand, OutageSpec,
};
use std::hint::black_box;

fn fitting(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit_scenario");
    for n in [100usize, 10_000] {
        let samples = urban_scatter(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &samples, |b, s| {
            b.iter(|| fit_scenario(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn coverage(c: &mut Criterion) {
    let g = grid(10.0);
    let blockers = crowd();
    c.bench_function("mean_coverage_map 100x100", |b| {
        b.iter(|| mean_coverage_map(black_box(&g), Environment::Urban, FrequencyBand::F28GHz, &blockers).unwrap())
    });

    let coarse = grid(50.0);
    let spec = OutageSpec { max_path_loss_db: 125.0, n_trials: 1_000, seed: 1 };
    c.bench_function("outage_map 20x20 x 1000 trials", |b| {
        b.iter(|| {
            outage_map(black_box(&coarse), Environment::Urban, FrequencyBand::F28GHz, &blockers, &spec)
                .unwrap()
        })
    });
}

criterion_group!(benches, fitting, coverage);
criterion_main!(benches);
