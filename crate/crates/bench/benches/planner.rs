use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use diameters_core::regiongraph::encode;
use diameters_core::{build_graph, enumerate_meanders, make_plan, sample_weights};

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for n in [6, 8, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| b.iter(|| enumerate_meanders(n).unwrap()));
    }
    group.finish();
}

fn plan_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("plan_all_meanders");
    for n in [6, 8] {
        let instances: Vec<_> = enumerate_meanders(n).unwrap().iter().map(|m| sample_weights(m, 7).unwrap()).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &instances, |b, instances| {
            b.iter(|| {
                for wm in instances {
                    black_box(make_plan(wm).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn encoding(c: &mut Criterion) {
    let graphs: Vec<_> = enumerate_meanders(8)
        .unwrap()
        .iter()
        .map(|m| build_graph(&sample_weights(m, 1).unwrap()).unwrap())
        .collect();
    c.bench_function("encode n=8", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(encode(g).unwrap());
            }
        })
    });
}

criterion_group!(benches, enumerate, plan_sweep, encoding);
criterion_main!(benches);
