use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use diameters_core::geometry::{arrangement_weights, rotated_diameter, RotationParams};

fn rotate(c: &mut Criterion) {
    let mut group = c.benchmark_group("rotated_diameter+arrangement");
    for t in [2.3, 10.2, 20.0] {
        let params = RotationParams::new(t);
        group.bench_with_input(BenchmarkId::from_parameter(t), &params, |b, p| {
            b.iter(|| black_box(arrangement_weights(&rotated_diameter(p).unwrap()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, rotate);
criterion_main!(benches);
