//! Parallel vs sequential comparison for the data-parallel inner
//! loops: Fourier matrix assembly and the bounded conjugator search.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use weylchar_core::coxeter::{AffineDatum, WeylElement};
use weylchar_core::fourier::{build_mset, fourier_matrix, fourier_matrix_seq};
use weylchar_core::groups::samples;
use weylchar_core::torus::conjugate_in_wprime;

fn bench_fourier(c: &mut Criterion) {
    let m = build_mset(samples::symmetric_4()).unwrap();
    let mut group = c.benchmark_group("fourier_matrix_s4");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| black_box(fourier_matrix(&m).unwrap()))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(fourier_matrix_seq(&m).unwrap()))
    });
    group.finish();
}

fn bench_conjugator_search(c: &mut Criterion) {
    let d = AffineDatum::builtin("g2aff").unwrap();
    let s1 = WeylElement::simple_reflection(&d, 1).unwrap();
    let s2 = WeylElement::simple_reflection(&d, 2).unwrap();
    let w = s1.group_op(&s2).unwrap().group_op(&s1).unwrap();
    let g = s2.group_op(&s1).unwrap();
    let target = g.group_op(&w).unwrap().group_op(&g.invert()).unwrap();
    let mut group = c.benchmark_group("conjugator_search_g2");
    group.sample_size(10);
    group.bench_function("bounded_search", |b| {
        b.iter(|| black_box(conjugate_in_wprime(&w, &target, 8).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, bench_fourier, bench_conjugator_search);
criterion_main!(benches);
