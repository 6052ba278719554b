use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cn_core::algo::{demo_program, enumerate_ground};
use cn_core::{Config, Engine, Exec};

fn algo_equal(c: &mut Criterion) {
    let p = demo_program(false);
    let pairs = enumerate_ground(&["x", "y"], 2, true);
    let mut group = c.benchmark_group("algo_equal add/add_swapped");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                // a fresh engine each time so memoised conditions do not carry over
                let e = Engine::new(Config {
                    exec,
                    ..Config::default()
                })
                .unwrap();
                e.algo_equal(&p, "add", "add_swapped", &pairs).unwrap()
            })
        });
    }
    group.finish();
}

fn reach(c: &mut Criterion) {
    let p = demo_program(false);
    let inputs = enumerate_ground(&["x", "y"], 2, true);
    let mut group = c.benchmark_group("reach f");
    group.sample_size(10);
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                let e = Engine::new(Config {
                    exec,
                    ..Config::default()
                })
                .unwrap();
                e.algo_of(&p, "f", &inputs).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, algo_equal, reach);
criterion_main!(benches);
