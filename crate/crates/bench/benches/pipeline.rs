use criterion::{black_box, criterion_group, criterion_main, Criterion};

use puiseux_bench::{problem, ALGEBRAIC, WORKED};
use puiseux_core::dsl::parse_problem;
use puiseux_core::polygon::build_polygon;
use puiseux_core::series::GenSeries;
use puiseux_core::solver::{check_admissible, complete, stabilization_check, CompleteOptions};

fn pipeline(c: &mut Criterion) {
    let p = problem(WORKED);
    let r = p.segment.clone().unwrap();
    let opts = CompleteOptions { budget: p.budget.clone(), policy: p.policy, ..Default::default() };

    c.bench_function("parse worked file", |b| b.iter(|| parse_problem(black_box(WORKED)).unwrap()));
    c.bench_function("admissibility x + x^tau", |b| {
        b.iter(|| check_admissible(&p.equation, black_box(&r), &p.basis).unwrap())
    });
    c.bench_function("complete worked, 8 terms", |b| {
        b.iter(|| complete(&p.equation, black_box(&r), &opts, &p.basis).unwrap())
    });

    let c8 = complete(&p.equation, &r, &opts, &p.basis).unwrap();
    let z = c8.survivors().next().unwrap().branch.prefix.clone();
    let z4 = GenSeries::from_terms(z.terms()[..4].to_vec(), &p.basis).unwrap();
    c.bench_function("stabilization check z4", |b| {
        b.iter(|| stabilization_check(&p.equation, black_box(&z4), &p.basis).unwrap())
    });
    let state = p.equation.substitute_polynomial(&z, &p.basis).unwrap();
    let cloud = state.cloud_points();
    c.bench_function("polygon of P[z8]", |b| b.iter(|| build_polygon(black_box(&cloud), &p.basis).unwrap()));

    let a = problem(ALGEBRAIC);
    c.bench_function("puiseux y0^2 - x^3", |b| {
        b.iter(|| complete(&a.equation, &GenSeries::zero(), &CompleteOptions::default(), &a.basis).unwrap())
    });
}

criterion_group!(benches, pipeline);
criterion_main!(benches);
