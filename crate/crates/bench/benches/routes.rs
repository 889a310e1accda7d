use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cdiff::cddt::{cddt_brute, cddt_char, CRange};
use cdiff::charsum::{Characters, WeilParams, DEFAULT_TOL};
use cdiff::gold::{cddt_closed, gold_table, GoldSpec};
use cdiff::{tables, Felt, FieldCtx, LinPoly};

const FIELDS: [(u32, u32); 4] = [(3, 2), (2, 4), (3, 3), (2, 5)];

fn spec(ctx: &FieldCtx) -> GoldSpec {
    GoldSpec::new(ctx, 1, LinPoly::parse(ctx, "bin:0,1").unwrap(), Felt(2)).unwrap()
}

fn routes(c: &mut Criterion) {
    let mut group = c.benchmark_group("cddt");
    group.sample_size(10);
    for (p, n) in FIELDS {
        let ctx = FieldCtx::new(p, n).unwrap();
        let ch = Characters::new(&ctx);
        let s = spec(&ctx);
        let table = gold_table(&ctx, &s);
        let id = format!("{p}^{n}");
        group.bench_with_input(BenchmarkId::new("brute", &id), &table, |b, t| b.iter(|| cddt_brute(&ctx, t, s.c)));
        group.bench_with_input(BenchmarkId::new("char", &id), &table, |b, t| {
            b.iter(|| cddt_char(&ch, t, s.c, DEFAULT_TOL).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("closed", &id), &s, |b, s| {
            b.iter(|| cddt_closed(&ch, s, DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn weil(c: &mut Criterion) {
    let ctx = FieldCtx::new(2, 8).unwrap();
    let ch = Characters::new(&ctx);
    let w = WeilParams::new(&ctx, 3, Felt(7), Felt(11)).unwrap();
    let mut group = c.benchmark_group("weil 2^8");
    group.bench_function("direct", |b| b.iter(|| ch.weil_direct(black_box(&w))));
    group.bench_function("closed", |b| b.iter(|| ch.weil_closed(black_box(&w)).unwrap()));
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    for n in [4, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| tables::sweep(n, &CRange::AllButOne).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, routes, weil, sweep);
criterion_main!(benches);
