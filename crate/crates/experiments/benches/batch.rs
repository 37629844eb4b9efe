use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use netgame_experiments::{parallel_enabled, run_batch, Config, RunOptions};

fn batch(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("batch_32");
    group.sample_size(10);
    let mut modes = vec![("sequential", Some(1))];
    if parallel_enabled() {
        modes.push(("rayon", None));
    }
    for (name, workers) in modes {
        group.bench_with_input(
            BenchmarkId::from_parameter(name),
            &workers,
            |b, &workers| {
                b.iter(|| {
                    run_batch(
                        &cfg,
                        32,
                        1,
                        RunOptions {
                            workers,
                            trajectories: false,
                        },
                    )
                    .unwrap()
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
