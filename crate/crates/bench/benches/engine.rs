use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_bigint::BigInt;
use ophh_core::linalg::{snf, IntMatrix};
use ophh_core::{
    build_complex, builtin_assoc, builtin_frobenius_end, compute_hh, verify_identity_suite, Flavor, FrobeniusSpec, Ring,
};

/// A deterministic dense 12x12 matrix with entries in [-9, 9].
fn matrix() -> IntMatrix {
    let rows =
        (0..12i64).map(|r| (0..12i64).map(|c| BigInt::from((r * 7 + c * 13 + r * c) % 19 - 9)).collect()).collect();
    IntMatrix::from_rows(rows).unwrap()
}

fn linalg(c: &mut Criterion) {
    let a = matrix();
    c.bench_function("snf 12x12", |b| b.iter(|| snf(black_box(&a))));
}

fn complexes(c: &mut Criterion) {
    let dual1 = builtin_frobenius_end(&FrobeniusSpec::dual1(), 6).unwrap();
    let assoc = builtin_assoc(8).unwrap();
    c.bench_function("build normalized complex dual1 cap 5", |b| {
        b.iter(|| build_complex(black_box(&dual1), 5, Flavor::Normalized).unwrap())
    });
    c.bench_function("homology assoc cap 8 over Z", |b| {
        b.iter(|| compute_hh(black_box(&assoc), 8, Flavor::Full, Ring::Integers).unwrap())
    });
    c.bench_function("homology dual1 cap 4 over Q", |b| {
        b.iter(|| compute_hh(black_box(&dual1), 4, Flavor::Normalized, Ring::Rationals).unwrap())
    });
}

fn identities(c: &mut Criterion) {
    let dual1 = builtin_frobenius_end(&FrobeniusSpec::dual1(), 5).unwrap();
    let mut group = c.benchmark_group("identity suite");
    group.sample_size(10);
    group.bench_function("dual1 cap 4, 20 pairs", |b| b.iter(|| verify_identity_suite(&dual1, 4, 20, 0).unwrap()));
    group.finish();
}

criterion_group!(benches, linalg, complexes, identities);
criterion_main!(benches);
