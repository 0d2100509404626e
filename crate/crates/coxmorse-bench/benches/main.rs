//! Benchmarks for the hot paths: group enumeration, the streamed coset
//! matching, the enumeration-free descent count, and integer homology.

use criterion::{criterion_group, criterion_main, Criterion};

use coxmorse_core::betti::descent_table;
use coxmorse_core::coxeter::CoxeterSystem;
use coxmorse_core::diagram::CoxeterDiagram;
use coxmorse_core::homology::{integral_homology, order_complex};
use coxmorse_core::morse::stream_audit;
use coxmorse_core::perm_complex::PermComplex;

fn bench_enumeration(c: &mut Criterion) {
    let f4 = CoxeterSystem::parse("F4").unwrap();
    let h4 = CoxeterSystem::parse("H4").unwrap();
    c.bench_function("enumerate F4 (1152)", |b| {
        b.iter(|| f4.enumerate(10_000).unwrap().len())
    });
    c.bench_function("enumerate H4 (14400)", |b| {
        b.iter(|| h4.enumerate(100_000).unwrap().len())
    });
}

fn bench_matching(c: &mut Criterion) {
    let a5 = CoxeterSystem::parse("A5").unwrap();
    let h3 = CoxeterSystem::parse("H3").unwrap();
    c.bench_function("stream matching Perm_3(A5)", |b| {
        b.iter(|| stream_audit(&a5, 3, 100_000).unwrap().cells)
    });
    c.bench_function("stream matching Perm_3(H3)", |b| {
        b.iter(|| stream_audit(&h3, 3, 100_000).unwrap().cells)
    });
}

fn bench_descent_counts(c: &mut Criterion) {
    let e8 = CoxeterDiagram::parse("E8").unwrap();
    c.bench_function("descent table E8 k=3", |b| {
        b.iter(|| descent_table(&e8, "E8", 3).unwrap().entries.len())
    });
    c.bench_function("descent table E8 k=4", |b| {
        b.iter(|| descent_table(&e8, "E8", 4).unwrap().entries.len())
    });
}

fn bench_homology_oracle(c: &mut Criterion) {
    let b3 = CoxeterSystem::parse("B3").unwrap();
    c.bench_function("order-complex SNF Perm_3(B3)", |b| {
        b.iter(|| {
            let complex = PermComplex::build(&b3, 3, 1000).unwrap();
            let chain = order_complex(&complex.face_poset());
            integral_homology(&chain).unwrap().betti.len()
        })
    });
}

criterion_group!(
    benches,
    bench_enumeration,
    bench_matching,
    bench_descent_counts,
    bench_homology_oracle
);
criterion_main!(benches);
