use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use krein_core::verify::{run_suite_with, Execution, Suite, SuiteConfig};

fn bench_suites(c: &mut Criterion) {
    let config = SuiteConfig {
        trials: 64,
        ..SuiteConfig::default()
    };
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::Completion, Suite::LemmaLjt2, Suite::ExtensionSandwich] {
        for (label, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, suite.name()), &suite, |b, &s| {
                b.iter(|| black_box(run_suite_with(s, &config, execution)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
