use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hasse_core::cubic::min_poly_of_t;
use hasse_core::splitting::membership_test;
use hasse_core::{
    class_number_real, factorize, field_discriminant, fundamental_unit, run_census, QuadElem,
};
use num_bigint::BigInt;

fn units(c: &mut Criterion) {
    c.bench_function("fundamental_unit 94", |b| b.iter(|| fundamental_unit(black_box(94))));
    c.bench_function("fundamental_unit 9941", |b| b.iter(|| fundamental_unit(black_box(9941))));
    c.bench_function("class_number_real 9941", |b| b.iter(|| class_number_real(black_box(9941))));
}

fn discriminants(c: &mut Criterion) {
    let f = min_poly_of_t(&fundamental_unit(79).unwrap());
    c.bench_function("field_discriminant 79", |b| b.iter(|| field_discriminant(black_box(&f))));
    let n = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
    c.bench_function("factorize semiprime", |b| b.iter(|| factorize(black_box(&n))));
}

fn residuacity(c: &mut Criterion) {
    let u = QuadElem::new(79, 1376, 387, 1).unwrap();
    c.bench_function("membership_test 50 primes", |b| {
        b.iter(|| membership_test(black_box(&u), 1, 50, 10_000_000))
    });
}

fn census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    group.bench_function("full", |b| b.iter(run_census));
    group.finish();
}

criterion_group!(benches, units, discriminants, residuacity, census);
criterion_main!(benches);
