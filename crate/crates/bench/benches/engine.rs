//! Hot-path benchmarks: exact polynomial products, cover counting,
//! fixed-locus enumeration, and a complete symbolic invariant.

use criterion::{criterion_group, criterion_main, Criterion};
use gkmgw_core::crcoh::point_class;
use gkmgw_core::fixedloci::enumerate;
use gkmgw_core::gkm::catalog::catalog;
use gkmgw_core::gkm::EffClass;
use gkmgw_core::groups::FiniteGroup;
use gkmgw_core::localize::{invariant, EngineConfig, Insertion, InvariantQuery};
use gkmgw_core::qfield::{rat_i, Poly};
use std::hint::black_box;

fn beta(entries: &[(&str, u64)]) -> EffClass {
    EffClass(entries.iter().map(|&(e, d)| (e.to_string(), d)).collect())
}

fn poly_products(c: &mut Criterion) {
    let base = Poly::var(2, 0).add(&Poly::var(2, 1)).add(&Poly::constant(2, rat_i(1)));
    let dense = base.pow(6);
    c.bench_function("poly_mul_two_vars_deg6", |b| {
        b.iter(|| black_box(&dense).mul(black_box(&dense)))
    });
}

fn cover_counts(c: &mut Criterion) {
    let s4 = FiniteGroup::symmetric(4);
    c.bench_function("count_covers_s4_genus1", |b| {
        b.iter(|| black_box(&s4).count_covers(1, black_box(&[1usize, 2, 3])))
    });
}

fn fixed_loci(c: &mut Criterion) {
    let p2 = catalog("P2").unwrap();
    let d2 = beta(&[("e01", 1), ("e02", 1)]);
    c.bench_function("enumerate_p2_degree2_n2", |b| {
        b.iter(|| enumerate(black_box(&p2), 0, 2, black_box(&d2), None).unwrap())
    });
}

fn small_invariant(c: &mut Criterion) {
    let p2 = catalog("P2").unwrap();
    let q = InvariantQuery {
        genus: 0,
        degree: beta(&[("e01", 1)]),
        insertions: vec![
            Insertion { psi: 0, class: point_class(&p2, "p0") },
            Insertion { psi: 0, class: point_class(&p2, "p1") },
        ],
    };
    let config = EngineConfig::default();
    c.bench_function("invariant_p2_line_two_points", |b| {
        b.iter(|| invariant(black_box(&p2), black_box(&q), &config).unwrap())
    });
}

criterion_group!(benches, poly_products, cover_counts, fixed_loci, small_invariant);
criterion_main!(benches);
