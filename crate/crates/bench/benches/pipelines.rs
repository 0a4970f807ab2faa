use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ccr_core::ccr::{self, CcrSpec, K1Profile};
use ccr_core::numkit::SkewTridiag;

fn bench_frequencies(c: &mut Criterion) {
    let mut group = c.benchmark_group("frequencies");
    for n in [4usize, 8, 16, 32] {
        let band: Vec<f64> = (1..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let f = SkewTridiag::new(band).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| f.frequencies().unwrap())
        });
    }
    group.finish();
}

fn bench_synthesize(c: &mut Criterion) {
    let spec = CcrSpec::new(
        4,
        vec![0.5, 3f64.sqrt() / 2.0],
        K1Profile::RationalSqrt { scale: 2.0, rate: 2.0 },
        (-0.45, 0.45),
        None,
        None,
    )
    .unwrap();
    let mut group = c.benchmark_group("synthesize");
    group.sample_size(20);
    for steps in [1_000usize, 10_000] {
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &steps| {
            b.iter(|| ccr::synthesize(&spec, steps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_frequencies, bench_synthesize);
criterion_main!(benches);
