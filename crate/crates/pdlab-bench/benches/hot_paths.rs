//! Criterion benchmarks for the throughput-sensitive paths: draw
//! generation, the density solve, table queries, and the closed-form
//! interval probability that backs the timing-sensitive exact check.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use pdlab_core::density::{solve_g1, DEFAULT_GRID_POINTS, DEFAULT_K_MAX};
use pdlab_core::ldp::{exact_beta_interval_logprob, sample_tilted, TiltIntensity};
use pdlab_core::ratefn::largest_atom_rate;
use pdlab_core::sampler::{sample_gamma_atoms, sample_pd, RngStream};
use pdlab_core::simplex::MutationRate;
use std::hint::black_box;

fn bench_samplers(c: &mut Criterion) {
    let theta = MutationRate::new(0.5).unwrap();
    let mut group = c.benchmark_group("sampler");
    group.bench_function("gem_draw_theta_0.5", |b| {
        let mut rng = RngStream::new(7, 0).rng();
        b.iter(|| sample_pd(theta, 1e-8, &mut rng).unwrap())
    });
    group.bench_function("gamma_draw_theta_0.5", |b| {
        let mut rng = RngStream::new(7, 1).rng();
        b.iter(|| {
            let atoms = sample_gamma_atoms(theta, 1e-8, &mut rng).unwrap();
            atoms.normalize().unwrap()
        })
    });
    group.finish();
}

fn bench_density(c: &mut Criterion) {
    let theta = MutationRate::new(0.5).unwrap();
    let mut group = c.benchmark_group("density");
    group.sample_size(10);
    group.bench_function("solve_small_grid", |b| {
        b.iter(|| solve_g1(theta, 4, 256).unwrap())
    });
    group.finish();

    let table = solve_g1(theta, DEFAULT_K_MAX, DEFAULT_GRID_POINTS).unwrap();
    c.bench_function("density/cdf_query", |b| {
        let mut x = 0.131;
        b.iter(|| {
            // walk the query point so caching inside the evaluator cannot
            // trivialize the measurement
            x = if x > 0.9 { 0.131 } else { x + 0.0137 };
            table.cdf_p1(black_box(x)).unwrap()
        })
    });
}

fn bench_exact_and_rates(c: &mut Criterion) {
    let theta = MutationRate::new(1e-8).unwrap();
    c.bench_function("exact/beta_interval_logprob", |b| {
        b.iter(|| exact_beta_interval_logprob(theta, black_box(0.0), black_box(0.5)).unwrap())
    });
    c.bench_function("rate/largest_atom_grid_10k", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..=10_000 {
                let p = i as f64 / 10_000.0;
                if let Some(v) = largest_atom_rate(p).unwrap().finite() {
                    acc += v;
                }
            }
            acc
        })
    });
}

fn bench_tilted(c: &mut Criterion) {
    let theta = MutationRate::new(0.05).unwrap();
    let mut group = c.benchmark_group("tilted");
    group.sample_size(10);
    group.bench_function("batch_10k_draws", |b| {
        b.iter_batched(
            || RngStream::new(11, 0),
            |base| {
                sample_tilted(theta, -2.0, 2, TiltIntensity::Critical, 1e-8, 10_000, base).unwrap()
            },
            BatchSize::PerIteration,
        )
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_samplers,
    bench_density,
    bench_exact_and_rates,
    bench_tilted
);
criterion_main!(benches);
