use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twistspec_bench::{random_cloud, random_tridiagonal};
use twistspec_core::{
    build_perturbed, continuant_log_det, eigenvalues, hausdorff, log_abs_det, presets, sliced_w1, Complex64,
    EmpiricalMeasure, NoiseSpec,
};

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eigenvalues");
    group.sample_size(10);
    let sym = presets::by_name("fig1").unwrap();
    for n in [100usize, 250, 500] {
        let m = build_perturbed(&sym, n, 1.0 / n as f64, &NoiseSpec::default(), 0).unwrap();
        group.bench_with_input(BenchmarkId::new("fig1-perturbed", n), &m, |b, m| b.iter(|| eigenvalues(black_box(m))));
    }
    group.finish();
}

/// The O(n) continuant recurrence against banded LU on the same determinant.
fn log_determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("log-det");
    let z = Complex64::new(0.3, 2.1);
    for n in [1_000usize, 10_000, 100_000] {
        let m = random_tridiagonal(n, 1);
        group.bench_with_input(BenchmarkId::new("continuant", n), &m, |b, m| {
            b.iter(|| continuant_log_det(black_box(m), z).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("banded-lu", n), &m, |b, m| b.iter(|| log_abs_det(black_box(m), z)));
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distances");
    group.sample_size(20);
    let spectrum = EmpiricalMeasure::new(random_cloud(1_000, 2)).unwrap();
    let samples = EmpiricalMeasure::new(random_cloud(100_000, 3)).unwrap();
    group.bench_function("sliced-w1/1e3-vs-1e5", |b| {
        b.iter(|| sliced_w1(black_box(&spectrum), black_box(&samples), 32).unwrap())
    });
    group.bench_function("hausdorff/1e3-vs-1e5", |b| {
        b.iter(|| hausdorff(black_box(spectrum.cloud()), black_box(samples.cloud())).unwrap())
    });
    group.finish();
}

criterion_group!(benches, eigensolver, log_determinants, distances);
criterion_main!(benches);
