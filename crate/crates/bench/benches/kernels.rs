use std::hint::black_box;

use contrast_core::asymptotics::{full_resolvent_truncated, resolvent_convergence};
use contrast_core::disk::{m_minus, m_plus, mode_eigenvalues_plus};
use contrast_core::numerics::{bessel_j, bessel_y, operator_norm};
use contrast_core::spectra::{default_window, effective_spectrum_dtn, transmission_spectrum};
use contrast_core::{Complex64, Geometry};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn geometry(a: f64) -> Geometry {
    Geometry::new(1.0, 2.0, a).unwrap()
}

fn bessel(c: &mut Criterion) {
    let mut group = c.benchmark_group("bessel");
    for x in [0.5, 7.3, 60.0] {
        group.bench_with_input(BenchmarkId::new("j", x), &x, |b, &x| b.iter(|| bessel_j(black_box(3), black_box(x))));
        group.bench_with_input(BenchmarkId::new("y", x), &x, |b, &x| b.iter(|| bessel_y(black_box(3), black_box(x))));
    }
    group.finish();
}

fn dtn_maps(c: &mut Criterion) {
    let g = geometry(1e3);
    c.bench_function("m_plus/n=2", |b| b.iter(|| m_plus(black_box(2), black_box(3.7), &g)));
    c.bench_function("m_minus/n=2", |b| b.iter(|| m_minus(black_box(2), black_box(3.7), &g)));
    c.bench_function("mode_eigenvalues_plus/n=1,count=64", |b| {
        b.iter(|| mode_eigenvalues_plus(black_box(1), &g, black_box(64)))
    });
}

fn spectra(c: &mut Criterion) {
    let g = geometry(1e3);
    let window = default_window(&g).unwrap();
    c.bench_function("transmission_spectrum/modes 0..5", |b| {
        b.iter(|| transmission_spectrum(&g, 0..5, black_box(window), 1e-10))
    });
    c.bench_function("effective_spectrum_dtn", |b| b.iter(|| effective_spectrum_dtn(&g, black_box(window), 1e-10)));
}

fn resolvents(c: &mut Criterion) {
    let g = geometry(1e3);
    let z = Complex64::new(1.0, 1.0);
    let mut group = c.benchmark_group("resolvent");
    group.sample_size(20);
    for k in [32, 64] {
        group.bench_with_input(BenchmarkId::new("full_truncated", k), &k, |b, &k| {
            b.iter(|| full_resolvent_truncated(0, &g, black_box(z), k, k))
        });
        let r = full_resolvent_truncated(0, &g, z, k, k).unwrap();
        group.bench_with_input(BenchmarkId::new("operator_norm", 2 * k), &r, |b, r| b.iter(|| operator_norm(r)));
    }
    group.bench_function("convergence sweep K=64 modes 0..5", |b| {
        b.iter(|| resolvent_convergence(&g, z, &[1e2, 1e3, 1e4, 1e5], 0..5, 64, 64))
    });
    group.finish();
}

criterion_group!(benches, bessel, dtn_maps, spectra, resolvents);
criterion_main!(benches);
