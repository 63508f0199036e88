use criterion::{black_box, criterion_group, criterion_main, Criterion};
use srg_bench::{derivative_controller, half_disc, hull_points, lag_saturation, log_box};
use srg_core::analysis::robustness_margin;
use srg_core::region::{h_convex_hull, minkowski_product, Precision};
use srg_core::{SignalClass, SrgOptions};

fn product(c: &mut Criterion) {
    let prec = Precision::default();
    let mut g = c.benchmark_group("minkowski_product");
    g.sample_size(20);
    g.bench_function("disc_disc", |b| {
        b.iter(|| minkowski_product(black_box(&half_disc()), &half_disc(), &prec).unwrap())
    });
    g.bench_function("disc_log_box", |b| {
        b.iter(|| minkowski_product(black_box(&half_disc()), &log_box(), &prec).unwrap())
    });
    g.finish();
}

fn hull(c: &mut Criterion) {
    let prec = Precision::default();
    let mut g = c.benchmark_group("h_convex_hull");
    for n in [8, 64] {
        let pts = hull_points(n);
        g.bench_function(format!("{n}_points"), |b| b.iter(|| h_convex_hull(black_box(&pts), &prec)));
    }
    g.finish();
}

fn margin(c: &mut Criterion) {
    let (controller, plant) = (derivative_controller(), lag_saturation());
    let (class, opts) = (SignalClass::default(), SrgOptions::default());
    let mut g = c.benchmark_group("robustness_margin");
    g.sample_size(10);
    g.bench_function("example_1_c2", |b| {
        b.iter(|| robustness_margin(black_box(&controller), &plant, &class, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(benches, product, hull, margin);
criterion_main!(benches);
