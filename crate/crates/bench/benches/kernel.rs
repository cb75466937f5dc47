use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use xidd_bench::{default_bath, default_schedule, ChiConvention, FilterBank, KernelOptions, Scheme, DEFAULT_T};
use xidd_core::{build_bb_group, calibration_suite, gamma_exponents, C64};

fn filters(c: &mut Criterion) {
    let mut group = c.benchmark_group("filter_bank");
    for scheme in [Scheme::Pdd, Scheme::Udd] {
        let bank = FilterBank::new(&default_schedule(scheme, DEFAULT_T), ChiConvention::Toggling);
        let mut scratch = vec![C64::new(0.0, 0.0); 6];
        let mut out = vec![0.0; 5];
        group.bench_with_input(BenchmarkId::new("chi_norms", scheme), &bank, |b, bank| {
            b.iter(|| bank.chi_norms_into(black_box(37.5), &mut scratch, &mut out))
        });
    }
    group.finish();
}

fn exponents(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_exponents");
    group.sample_size(20);
    let bath = default_bath();
    let opts = KernelOptions::default();
    for scheme in [Scheme::Pdd, Scheme::Udd] {
        for t in [1.0, DEFAULT_T] {
            let schedule = default_schedule(scheme, t);
            group.bench_with_input(BenchmarkId::new(scheme.name(), t), &schedule, |b, s| {
                b.iter(|| gamma_exponents(black_box(s), &bath, &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn algebra(c: &mut Criterion) {
    c.bench_function("bb_group_n8", |b| b.iter(|| build_bb_group(black_box(8)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let case = calibration_suite().into_iter().next().expect("non-empty suite");
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function(case.name, |b| b.iter(|| case.evolve().unwrap()));
    group.finish();
}

criterion_group!(benches, filters, exponents, algebra, oracle);
criterion_main!(benches);
