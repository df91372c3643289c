use std::hint::black_box;

use conic_floors::absolute::x6::{gw_x6, w_x6, X6Structure};
use conic_floors::absolute::x7::{gw_x7, w_x7, X7Structure};
use conic_floors::absolute::x8::{gw_x8, w_x8, X8Structure};
use conic_floors::absolute::Engine;
use conic_floors::diagrams::enumerate_diagrams;
use conic_floors::relative_complex::{ComplexEngine, RelativeQuery};
use conic_floors::relative_real::{RealEdgeCount, RealEngine, RealQuery, Variant};
use conic_floors::MultiSeq;
use conic_floors_bench::x8_engine;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn diagrams(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_diagrams");
    for dd in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(dd), &dd, |b, &dd| {
            b.iter(|| enumerate_diagrams(black_box(dd), 0).len())
        });
    }
    group.finish();
}

fn relative(c: &mut Criterion) {
    let q = RelativeQuery::new(4, vec![1; 6], 0, MultiSeq::zero(), MultiSeq::from_dense(&[2]));
    c.bench_function("gw_rel 4:[1^6] beta=1^2", |b| b.iter(|| ComplexEngine::new().gw(black_box(&q)).unwrap()));

    let q = RealQuery::new(6, vec![2; 6], 3, 2, MultiSeq::zero(), MultiSeq::zero());
    c.bench_function("fw 6:[2^6] kappa=3 s=2", |b| {
        b.iter(|| RealEngine::new().fw(black_box(&q), Variant::SidedSided(1)).unwrap())
    });

    // all points real: counted, or visited one marking at a time
    let q = RealQuery::new(5, vec![1; 6], 3, 0, MultiSeq::from_dense(&[4]), MultiSeq::zero());
    let mut group = c.benchmark_group("fw 5:[1^6] kappa=3 s=0");
    group.bench_function("counting", |b| {
        b.iter(|| RealEngine::new().totals_with(black_box(&q), RealEdgeCount::Sources).unwrap())
    });
    group.sample_size(10);
    group.bench_function("enumeration", |b| {
        b.iter(|| RealEngine::new().totals_by_enumeration(black_box(&q), RealEdgeCount::Sources).unwrap())
    });
    group.finish();
}

fn absolute(c: &mut Criterion) {
    let two_c1 = |n: usize| vec![2i64; n];
    c.bench_function("gw_x6 2c1", |b| b.iter(|| gw_x6(&mut Engine::new(), 6, &two_c1(6), 0).unwrap().value));
    c.bench_function("w_x6 2c1 kappa=0", |b| {
        b.iter(|| w_x6(&mut Engine::new(), X6Structure::Kappa(0), 6, &two_c1(6), 0).unwrap().value)
    });
    c.bench_function("gw_x7 2c1", |b| b.iter(|| gw_x7(&mut Engine::new(), 6, &two_c1(7), 0).unwrap().value));
    c.bench_function("w_x7 2c1 minus-rp2", |b| {
        b.iter(|| w_x7(&mut Engine::new(), X7Structure::MinusRp2, 6, &two_c1(7), 0).unwrap().value)
    });
    c.bench_function("gw_x8 2c1", |b| b.iter(|| gw_x8(&mut x8_engine(), 6, &two_c1(8), 0).unwrap().value));
    c.bench_function("w_x8 2c1 kappa=0", |b| {
        b.iter(|| w_x8(&mut x8_engine(), X8Structure::Kappa(0), 6, &two_c1(8), 0).unwrap().value)
    });
}

criterion_group!(benches, diagrams, relative, absolute);
criterion_main!(benches);
