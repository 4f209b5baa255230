use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rigid_bench::{hopf, six_cusps, two_cusps};
use rigid_core::sphere::{classify_infinity, find_symmetric_periodic_orbit_with, OrbitSearchOptions};
use rigid_core::{find_limit_cycles, return_map, AbelCoeffs, IntegratorSettings};

fn bench_return_map(c: &mut Criterion) {
    let coeffs = AbelCoeffs::from(&hopf());
    let s = IntegratorSettings::default();
    c.bench_function("return_map", |b| {
        b.iter(|| return_map(black_box(&coeffs), black_box(0.3), &s).unwrap())
    });
}

fn bench_limit_cycles(c: &mut Criterion) {
    let coeffs = AbelCoeffs::from(&hopf());
    let s = IntegratorSettings::default();
    let mut g = c.benchmark_group("find_limit_cycles");
    g.sample_size(10);
    g.bench_function("hopf_grid_200", |b| {
        b.iter(|| find_limit_cycles(black_box(&coeffs), 2.0, 200, &s).unwrap())
    });
    g.finish();
}

fn bench_sphere(c: &mut Criterion) {
    let s = IntegratorSettings::default();
    let opts = OrbitSearchOptions::default();
    let mut g = c.benchmark_group("sphere");
    g.sample_size(10);
    g.bench_function("classify_infinity", |b| {
        b.iter(|| classify_infinity(black_box(&six_cusps())).unwrap())
    });
    g.bench_function("symmetric_orbit_two_cusps", |b| {
        b.iter(|| find_symmetric_periodic_orbit_with(black_box(&two_cusps()), &s, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_return_map, bench_limit_cycles, bench_sphere);
criterion_main!(benches);
