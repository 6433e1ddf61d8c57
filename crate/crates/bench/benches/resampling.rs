use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use resample_core::montecarlo::simulate_poll;
use resample_core::resampling::{bootstrap, enumerate_exact, shuffle_test};
use resample_core::{
    fixture, FixtureData, GroupedSample, PopulationVector, ResampleConfig, ResampleMode, Sample, Sidedness, Statistic,
};

fn veg6() -> GroupedSample {
    match fixture("veg6").unwrap().data {
        FixtureData::Grouped(g) => g,
        _ => unreachable!(),
    }
}

fn veg9() -> Sample {
    match fixture("veg9").unwrap().data {
        FixtureData::Sample(s) => s,
        _ => unreachable!(),
    }
}

fn shuffle(c: &mut Criterion) {
    let g = veg6();
    let mut group = c.benchmark_group("shuffle_test");
    for parallel in [false, true] {
        let config = ResampleConfig::new(10_000, 0).parallel(parallel);
        let id = if parallel { "parallel" } else { "serial" };
        group.bench_function(BenchmarkId::new("veg6_10k", id), |b| {
            b.iter(|| shuffle_test(black_box(&g), Statistic::DifferenceOfMeans, config, Sidedness::TwoSided))
        });
    }
    group.finish();

    let big =
        GroupedSample::from_rows((0..20).map(|i| (i as f64 * 1.7 % 11.0, if i < 10 { "a" } else { "b" }))).unwrap();
    c.bench_function("enumerate_exact_20_choose_10", |b| {
        b.iter(|| enumerate_exact(black_box(&big), Statistic::DifferenceOfMeans, Sidedness::TwoSided))
    });
}

fn boot(c: &mut Criterion) {
    let s = veg9();
    c.bench_function("bootstrap_veg9_10k", |b| {
        b.iter(|| bootstrap(black_box(&s), Statistic::Mean, ResampleConfig::new(10_000, 0)))
    });
}

fn poll(c: &mut Criterion) {
    let pop = PopulationVector::with_counts(300, 500).unwrap();
    c.bench_function("poll500_k100_without", |b| {
        b.iter(|| {
            simulate_poll(
                black_box(&pop),
                100,
                ResampleMode::WithoutReplacement,
                ResampleConfig::new(1000, 0),
            )
        })
    });
}

criterion_group!(benches, shuffle, boot, poll);
criterion_main!(benches);
