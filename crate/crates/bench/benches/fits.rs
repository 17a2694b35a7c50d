use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use proxim_core::powerlaw::{
    fit_cumulative, fit_density, fit_mle, fit_mle_truncated, fit_rank, sample_truncated_zipf, LogBinning,
};

fn estimators(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimators");
    for n in [1297usize, 10_000] {
        let sample = sample_truncated_zipf(n, 1.0, 5000.0, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("density", n), &sample, |b, s| {
            b.iter(|| fit_density(s, LogBinning::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("cumulative", n), &sample, |b, s| {
            b.iter(|| fit_cumulative(s).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("rank", n), &sample, |b, s| b.iter(|| fit_rank(s).unwrap()));
        group.bench_with_input(BenchmarkId::new("mle", n), &sample, |b, s| b.iter(|| fit_mle(s, None).unwrap()));
        group.bench_with_input(BenchmarkId::new("mle_truncated", n), &sample, |b, s| {
            b.iter(|| fit_mle_truncated(s, Some(1.0), 5000.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, estimators);
criterion_main!(benches);
