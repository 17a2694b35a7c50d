use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use proxim_core::gravity::{simulate, GravityConfig, MassModel, Region};

fn config(population: usize) -> GravityConfig {
    GravityConfig {
        population,
        region: Region::Torus { side: 1000.0 },
        mass_model: MassModel::Identical { mass: 1.0 },
        g: 180.0,
        r_floor: 15.0,
        seed: 1,
        max_links: 5_000_000,
    }
}

fn gravity(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    for m in [1000usize, 5000] {
        let cfg = config(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &cfg, |b, cfg| b.iter(|| simulate(cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, gravity);
criterion_main!(benches);
