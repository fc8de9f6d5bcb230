use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use vgsst_core::generate::{random_instance, EdgeModel, RandomParams};
use vgsst_core::oracle::{brute_force_optimum_with, Limits};
use vgsst_core::{solve_greedy_with, GreedyOptions, Instance, Parallelism};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn instance(vertices: usize, grades: usize, seed: u64) -> Instance {
    let params = RandomParams {
        edge_model: EdgeModel::Gnp((6.0 / vertices as f64).min(0.5)),
        terminal_fraction: 0.2,
        ..RandomParams::new(vertices, grades, seed)
    };
    random_instance(&params).expect("benchmark instance")
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy");
    group.sample_size(10);
    for vertices in [100, 400] {
        let inst = instance(vertices, 3, 7);
        for (name, parallelism) in MODES {
            group.bench_with_input(BenchmarkId::new(name, vertices), &inst, |b, inst| {
                b.iter(|| {
                    solve_greedy_with(black_box(inst), GreedyOptions { parallelism }).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force");
    group.sample_size(10);
    let inst = instance(10, 3, 11);
    let limits = Limits {
        max_vertices: 10,
        max_space: 10_000_000,
    };
    for (name, parallelism) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| brute_force_optimum_with(black_box(&inst), limits, parallelism).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, greedy, brute_force);
criterion_main!(benches);
