use criterion::{criterion_group, criterion_main, Criterion};
use icelab_bench::spectral_vectors;
use icelab_core::core_model::{SpectralParams, WeightTable};
use icelab_core::dwbc_mcmc::{McmcChain, McmcParams, WeightSpec};
use icelab_core::ik_determinants::{ik_rhs, SpectralVectors};
use icelab_core::stochastic_simulator::{sample_height, StochasticParams};
use icelab_core::{exact_enum, rmt_reference, Complex64};
use std::hint::black_box;

fn bench_weights(c: &mut Criterion) {
    let p = SpectralParams::new(Complex64::new(0.3, 0.0), Complex64::new(0.6, 0.0)).unwrap();
    c.bench_function("weights_from_spectral", |b| {
        b.iter(|| WeightTable::from_spectral(black_box(p)).unwrap())
    });
}

fn bench_enumeration(c: &mut Criterion) {
    c.bench_function("dwbc_enumerate_n4", |b| {
        let (x, y, t) = spectral_vectors(4);
        b.iter(|| exact_enum::dwbc_partition(4, black_box(&x), black_box(&y), t).unwrap())
    });
}

fn bench_ik_determinant(c: &mut Criterion) {
    c.bench_function("ik_rhs_n8", |b| {
        let (x, y, t) = spectral_vectors(8);
        let sv = SpectralVectors::new(x, y, t).unwrap();
        b.iter(|| ik_rhs(black_box(&sv)).unwrap())
    });
}

fn bench_sampler(c: &mut Criterion) {
    let p = StochasticParams::new(512, 0.25, 0.5, 1, 1).unwrap();
    let mut idx = 0u64;
    c.bench_function("stochastic_sample_n512", |b| {
        b.iter(|| {
            idx += 1;
            sample_height(black_box(&p), idx).unwrap()
        })
    });
}

fn bench_mcmc_sweep(c: &mut Criterion) {
    let params = McmcParams::new(64, WeightSpec::DeltaZero { theta: 1.2 }, 3);
    let mut chain = McmcChain::new(&params).unwrap();
    c.bench_function("mcmc_sweep_n64", |b| b.iter(|| chain.sweep()));
}

fn bench_airy(c: &mut Criterion) {
    c.bench_function("airy_fn", |b| {
        let mut x = -8.0;
        b.iter(|| {
            x = if x > 8.0 { -8.0 } else { x + 0.37 };
            rmt_reference::airy_fn(black_box(x)).unwrap()
        })
    });
}

fn bench_tracy_widom(c: &mut Criterion) {
    c.bench_function("tracy_widom_f2_m48", |b| {
        b.iter(|| rmt_reference::tracy_widom_f2(black_box(-2.0), 48).unwrap())
    });
}

criterion_group!(
    benches,
    bench_weights,
    bench_enumeration,
    bench_ik_determinant,
    bench_sampler,
    bench_mcmc_sweep,
    bench_airy,
    bench_tracy_widom
);
criterion_main!(benches);
