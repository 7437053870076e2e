//! Hot-path benchmarks: parsing, feature extraction per selection, forest
//! prediction, and the full classify path.

use criterion::{criterion_group, criterion_main, Criterion};
use dgaclass_bench::fixture;
use dgaclass_core::domains;
use dgaclass_core::features;
use std::hint::black_box;

fn bench_pipeline(c: &mut Criterion) {
    let fx = fixture();
    let raw = "mwkwhvkdpp.info";
    let parsed = domains::parse(raw, &fx.suffix_db).unwrap();
    let union_vector = features::extract(&parsed, &fx.union).unwrap();
    let rfe_vector = features::extract(&parsed, &fx.rfe_pi).unwrap();

    c.bench_function("parse", |b| {
        b.iter(|| domains::parse(black_box(raw), &fx.suffix_db).unwrap())
    });

    c.bench_function("extract/union-76", |b| {
        b.iter(|| features::extract(black_box(&parsed), &fx.union).unwrap())
    });

    c.bench_function("extract/rfe-pi-28", |b| {
        b.iter(|| features::extract(black_box(&parsed), &fx.rfe_pi).unwrap())
    });

    c.bench_function("predict/union-76", |b| {
        b.iter(|| fx.model_union.predict(black_box(union_vector.values())).unwrap())
    });

    c.bench_function("predict/rfe-pi-28", |b| {
        b.iter(|| fx.model_rfe_pi.predict(black_box(rfe_vector.values())).unwrap())
    });

    c.bench_function("explain/union-76", |b| {
        b.iter(|| fx.model_union.explain(black_box(union_vector.values()), 5).unwrap())
    });

    let mut group = c.benchmark_group("classify-end-to-end");
    for (name, selection, model) in [
        ("union-76", &fx.union, &fx.model_union),
        ("rfe-pi-28", &fx.rfe_pi, &fx.model_rfe_pi),
    ] {
        group.bench_function(name, |b| {
            let mut i = 0usize;
            let domains_list = fx.dataset.domains();
            b.iter(|| {
                let raw = &domains_list[i % domains_list.len()];
                i += 1;
                let parsed = domains::parse(black_box(raw), &fx.suffix_db).unwrap();
                let vector = features::extract(&parsed, selection).unwrap();
                model.predict(vector.values()).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_pipeline);
criterion_main!(benches);
