use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hrw_core::diffusion::{fd_integrate, DensityField, DiffusionParams, Grid1D, VarianceConvention};
use hrw_core::ensemble::{run_ensemble, run_ensemble_sequential};
use hrw_core::{HomotopyParams, WalkConfig};

fn ensembles(c: &mut Criterion) {
    let params = HomotopyParams::new(0.5, 0.5, 1.0).unwrap();
    let config = WalkConfig::new(1000, 0.5, 1.0, params).unwrap().with_seed(7);
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);
    for walkers in [1_000usize, 10_000] {
        group.bench_with_input(BenchmarkId::new("parallel", walkers), &walkers, |b, &n| {
            b.iter(|| run_ensemble(&config, n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", walkers), &walkers, |b, &n| {
            b.iter(|| run_ensemble_sequential(&config, n).unwrap())
        });
    }
    group.finish();
}

fn crank_nicolson(c: &mut Criterion) {
    let params = HomotopyParams::new(0.5, 0.5, 1.0).unwrap();
    let dp = DiffusionParams::normalized(1.0, VarianceConvention::HeatKernel).unwrap();
    let grid = Grid1D::covering(0.5, 6.0, 2000, &dp, &params).unwrap();
    let initial = DensityField::analytic(grid, 0.05, &dp, &params).unwrap();
    let mut group = c.benchmark_group("crank_nicolson");
    group.sample_size(10);
    group.bench_function("2000_nodes_to_t_0.5", |b| {
        b.iter(|| fd_integrate(&initial, 0.5, &dp, &params).unwrap())
    });
    group.finish();
}

criterion_group!(benches, ensembles, crank_nicolson);
criterion_main!(benches);
