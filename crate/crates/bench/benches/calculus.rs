use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wheeling_core::calculus::{chi, chi_inverse, connected_sum};
use wheeling_core::diagrams::canonicalize;
use wheeling_core::sl2::sl2_reduce;
use wheeling_core::spaces::{enumerate, quotient_basis};
use wheeling_core::wheels::{chord, omega, upsilon, wheel};
use wheeling_core::{Engine, EngineConfig, Filter, Signature};

fn spaces(c: &mut Criterion) {
    let star: Signature = "*x".parse().unwrap();
    let up: Signature = "up:x".parse().unwrap();
    c.bench_function("enumerate B(*x) degree 4", |b| {
        b.iter(|| enumerate(black_box(&star), 4, Filter::All, None))
    });
    let span = enumerate(&up, 3, Filter::All, None).unwrap();
    c.bench_function("canonicalize A(up) degree 3", |b| {
        b.iter(|| {
            for d in &span {
                black_box(canonicalize(&d.to_graph(), &up).unwrap());
            }
        })
    });
    c.bench_function("quotient A(up) degree 3", |b| {
        b.iter(|| {
            let e = Engine::new(EngineConfig::default());
            quotient_basis(&e, &up, 3, Filter::All).unwrap().dim()
        })
    });
}

fn calculus(c: &mut Criterion) {
    let e = Engine::new(EngineConfig::default());
    let w = omega(6).unwrap();
    let w4 = wheel(4, "x").unwrap();
    c.bench_function("chi of w4", |b| b.iter(|| chi(black_box(&w4), "x")));
    let cc = connected_sum(&chord("x").unwrap(), &chord("x").unwrap(), "x").unwrap();
    chi_inverse(&e, &cc, "x").unwrap();
    c.bench_function("chi inverse of two chords (warm)", |b| {
        b.iter(|| chi_inverse(&e, black_box(&cc), "x"))
    });
    c.bench_function("upsilon of w4", |b| {
        b.iter(|| upsilon(black_box(&w4), &w, "x"))
    });
    let w8 = wheel(8, "x").unwrap();
    c.bench_function("sl2 of w8", |b| b.iter(|| sl2_reduce(black_box(&w8))));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = spaces, calculus
}
criterion_main!(benches);
