use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use raag_atlas::census::{census, CensusOptions};
use raag_atlas::par::Exec;

fn bench_census(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for n in [4, 5] {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |b, &n| {
                b.iter(|| {
                    census(CensusOptions {
                        n,
                        dedup_iso: false,
                        exec,
                    })
                    .unwrap()
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_census);
criterion_main!(benches);
