use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heckeavg_bench::{delta_normalized, eta_twelve_fixture};
use heckeavg_core::horizontal::{avf_partial, measure_moment, LimitMeasure};
use heckeavg_core::level1::{hecke_matrix, hecke_precision, tau_series};
use heckeavg_core::series::mul_truncated;
use heckeavg_core::trace::{trace_hecke, LevelWeight, TracePlan};
use heckeavg_core::vertical::{classify_with, ClassifyOptions};
use heckeavg_core::TraceCache;

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    for len in [10_000usize, 100_000] {
        g.bench_with_input(BenchmarkId::new("tau_series", len), &len, |b, &len| {
            b.iter(|| tau_series(black_box(len)).unwrap())
        });
        let s = eta_twelve_fixture(len);
        g.bench_with_input(BenchmarkId::new("square_eta12", len), &s, |b, s| {
            b.iter(|| mul_truncated(black_box(s), s, s.len()).unwrap())
        });
    }
    g.finish();
}

fn traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace");
    for (n, k, m) in [(1u64, 12u32, 4u64), (37, 2, 4), (1155, 24, 4), (10007, 2, 4)] {
        let space = LevelWeight::new(n, k).unwrap();
        g.bench_function(format!("trace_hecke/{n}_{k}_{m}"), |b| {
            b.iter(|| trace_hecke(black_box(space), m).unwrap())
        });
    }
    let plan = TracePlan::new(3, 4).unwrap();
    g.bench_function("plan_evaluate/3_4_k2..180", |b| {
        b.iter(|| {
            for k in (2..180).step_by(2) {
                black_box(plan.evaluate(k).unwrap());
            }
        })
    });
    g.bench_function("hecke_matrix/k24_m4", |b| {
        b.iter(|| hecke_matrix(24, 4, hecke_precision(24, 4)).unwrap().trace())
    });
    g.finish();
}

fn vertical(c: &mut Criterion) {
    let mut g = c.benchmark_group("vertical");
    g.sample_size(10);
    let options = ClassifyOptions {
        level_limit: 5_000,
        chunk: 5_000,
    };
    g.bench_function("classify/levels_below_5000", |b| {
        b.iter(|| classify_with(options, &TraceCache::new(), &|_, _| {}).unwrap())
    });
    g.finish();
}

fn horizontal(c: &mut Criterion) {
    let mut g = c.benchmark_group("horizontal");
    let delta = delta_normalized(100_000);
    g.bench_function("avf_partial/1e5", |b| b.iter(|| avf_partial(black_box(&delta), 100_000).unwrap()));
    for (name, mu) in [
        ("sato_tate", LimitMeasure::SatoTate),
        ("cm", LimitMeasure::Cm),
        ("serre_2", LimitMeasure::Serre(2)),
    ] {
        g.bench_function(format!("measure_moment/{name}/r0.5"), |b| {
            b.iter(|| measure_moment(mu, black_box(0.5), true).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, series, traces, vertical, horizontal);
criterion_main!(benches);
