//! Microbenchmarks for the hot paths: the user-split kernel, the market
//! solvers on both the closed-form and numeric routes, a parallel
//! parameter sweep, and the price-deviation audit.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lteu_market::{
    solve, solve_monopoly, sweep, verify_nash, wardrop_split, CongestionFn, DemandCurve,
    MarketConfig, ParamAxis,
};

fn linear() -> (CongestionFn, DemandCurve) {
    (CongestionFn::linear(), DemandCurve::linear())
}

fn reference() -> MarketConfig {
    MarketConfig::multi_entrant(1.0, 1.0, 2).with_lteu(0.5, 0.5)
}

fn bench_wardrop_split(c: &mut Criterion) {
    let (g, p) = linear();
    let cfg = reference();
    let prices = vec![0.3, 0.0];
    c.bench_function("wardrop_split/two_services", |b| {
        b.iter(|| wardrop_split(black_box(&prices), &cfg, &g, &p).unwrap())
    });
}

fn bench_solvers(c: &mut Criterion) {
    let (g, p) = linear();
    let mut group = c.benchmark_group("solve");

    let mono = MarketConfig::monopoly(1.0, 1.0).with_lteu(0.5, 0.5);
    group.bench_function("monopoly_closed_form", |b| {
        b.iter(|| solve_monopoly(black_box(&mono), &g, &p).unwrap())
    });

    // An opaque congestion closure disables the linear shortcut and forces
    // the coordinate-ascent route.
    let opaque = CongestionFn::custom(|x| x);
    group.bench_function("monopoly_numeric", |b| {
        b.iter(|| solve_monopoly(black_box(&mono), &opaque, &p).unwrap())
    });

    let multi = reference();
    group.bench_function("multi_entrant", |b| {
        b.iter(|| solve(black_box(&multi), &g, &p).unwrap())
    });

    let one = MarketConfig::one_entrant_licensed(5.0, 1.0).with_lteu(0.5, 0.5);
    group.bench_function("one_entrant_licensed", |b| {
        b.iter(|| solve(black_box(&one), &g, &p).unwrap())
    });

    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let (g, p) = linear();
    let cfg = reference();
    let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    c.bench_function("sweep/duty_cycle_201", |b| {
        b.iter(|| sweep(black_box(&cfg), ParamAxis::DutyCycle, &grid, &g, &p).unwrap())
    });
}

fn bench_verify(c: &mut Criterion) {
    let (g, p) = linear();
    let cfg = reference();
    let out = solve(&cfg, &g, &p).unwrap();
    c.bench_function("verify_nash/grid_2000", |b| {
        b.iter(|| verify_nash(black_box(&out), &cfg, &g, &p, 2000, 1e-4).unwrap())
    });
}

criterion_group!(
    benches,
    bench_wardrop_split,
    bench_solvers,
    bench_sweep,
    bench_verify
);
criterion_main!(benches);
