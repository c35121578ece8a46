use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vincycle::enumerator::{Enumerator, Exec, SearchConfig};
use vincycle::pattern::PatternSet;

fn paths() -> Vec<(&'static str, SearchConfig)> {
    let mut v = vec![("sequential", SearchConfig::sequential())];
    if cfg!(feature = "parallel") {
        v.push((
            "parallel",
            SearchConfig {
                exec: Exec::Parallel { jobs: None },
                ..SearchConfig::default()
            },
        ));
    }
    v
}

fn bench_counts(c: &mut Criterion) {
    let cases = [
        ("[1~3,2,4]", 10),
        ("[1~2~3] [2~3~1]", 12),
        ("[1~4,2,3]", 10),
    ];
    let mut g = c.benchmark_group("count");
    g.sample_size(10);
    for (set, n) in cases {
        let ps: PatternSet = set.parse().unwrap();
        for (name, cfg) in paths() {
            let e = Enumerator::new(&ps, cfg).unwrap();
            g.bench_with_input(
                BenchmarkId::new(name, format!("{set} n={n}")),
                &n,
                |b, &n| b.iter(|| black_box(e.count(n).unwrap())),
            );
        }
    }
    g.finish();
}

criterion_group!(benches, bench_counts);
criterion_main!(benches);
