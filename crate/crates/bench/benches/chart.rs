use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use structrep::oracle::{census, OracleConfig};
use structrep::{best_first, forward_chain, size_distribution, EngineConfig};
use structrep_bench::{case, prefix};

fn engines(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let mut group = c.benchmark_group("engine");
    group.sample_size(10);
    for name in ["coffee", "jazz"] {
        let (g, seq) = case(name);
        group.bench_function(BenchmarkId::new("best_first", name), |b| {
            b.iter(|| best_first(black_box(&g), black_box(&seq), &cfg).unwrap())
        });
        group.bench_function(BenchmarkId::new("forward_chain", name), |b| {
            b.iter(|| forward_chain(black_box(&g), black_box(&seq), &cfg).unwrap())
        });
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let (g, seq) = case("jazz");
    let chart = forward_chain(&g, &seq, &cfg).unwrap();
    c.bench_function("size_distribution/jazz", |b| b.iter(|| size_distribution(black_box(&chart)).unwrap()));
}

// chart growth with sequence length, against brute force on the short end
fn scaling(c: &mut Criterion) {
    let cfg = EngineConfig::default();
    let mut group = c.benchmark_group("jazz_prefix");
    group.sample_size(10);
    for n in [3, 5, 7, 9] {
        let (g, seq) = prefix("jazz", n);
        group.bench_with_input(BenchmarkId::new("forward_chain", n), &seq, |b, s| {
            b.iter(|| forward_chain(&g, s, &cfg).unwrap())
        });
    }
    let (g, seq) = prefix("jazz", 3);
    group.bench_function("oracle_census/3", |b| b.iter(|| census(&g, &seq, &OracleConfig::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, engines, counting, scaling);
criterion_main!(benches);
