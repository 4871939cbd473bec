use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use webdimer::basisgen::sl3_basis;
use webdimer::dimers::enumerate_dimer_covers_with;
use webdimer::enumeration::enumerate_sl4_tree_webs_with;
use webdimer::pairing::duality_matrix_with;
use webdimer::par::Exec;
use webdimer::plabic::make_rectangle_graph;

const ENGINES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn dimer_enumeration(c: &mut Criterion) {
    let g = make_rectangle_graph(3, 9).unwrap();
    let mut group = c.benchmark_group("dimer_covers_3_9_r3");
    group.sample_size(10);
    for (name, exec) in ENGINES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_dimer_covers_with(&g, 3, black_box(&[1; 9]), exec).unwrap().len())
        });
    }
    group.finish();
}

fn duality(c: &mut Criterion) {
    let basis = sl3_basis(&[1; 9]).unwrap();
    let mut group = c.benchmark_group("duality_3_3");
    group.sample_size(10);
    for (name, exec) in ENGINES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| duality_matrix_with(black_box(&basis), &basis, exec).unwrap().1)
        });
    }
    group.finish();
}

fn sl4_trees(c: &mut Criterion) {
    let mut group = c.benchmark_group("sl4_trees_12");
    group.sample_size(10);
    for (name, exec) in ENGINES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_sl4_tree_webs_with(black_box(12), 123, exec).unwrap().1.trees)
        });
    }
    group.finish();
}

criterion_group!(benches, dimer_enumeration, duality, sl4_trees);
criterion_main!(benches);
