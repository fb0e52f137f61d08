use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use wikiease_bench::{dataset, editor_matrix};
use wikiease_core::{entity_gram, fit};

fn bench_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    for n in [200, 500, 1000] {
        let fm = editor_matrix(&dataset(n));
        group.bench_with_input(BenchmarkId::new("gram", n), &fm, |b, fm| {
            b.iter(|| entity_gram(black_box(fm)))
        });
        group.bench_with_input(BenchmarkId::new("closed_form", n), &fm, |b, fm| {
            b.iter(|| fit(black_box(fm), 100.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_fit);
criterion_main!(benches);
