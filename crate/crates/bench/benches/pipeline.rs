use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qposes_bench::{full_options, l_ligand, layout_for};
use qposes_core::{build_increment, build_unified, enumerate_poses, encode_state, run, verify};

fn increment(c: &mut Criterion) {
    let reg: Vec<usize> = (0..16).collect();
    c.bench_function("build_increment/16", |b| {
        b.iter(|| build_increment(black_box(&reg), 0, &[16, 17]).unwrap())
    });
}

fn simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate_unified");
    for m in [1u32, 2, 3] {
        let grid = l_ligand(4, 6);
        let opts = full_options(m);
        let layout = layout_for(&grid, &opts);
        let circuit = build_unified(&layout, &opts).unwrap();
        let initial = encode_state(&grid, &layout).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, _| {
            b.iter(|| run(black_box(&circuit), black_box(&initial)).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let grid = l_ligand(4, 6);
    let opts = full_options(2);
    c.bench_function("enumerate_poses/m2", |b| {
        b.iter(|| enumerate_poses(black_box(&grid), &opts).unwrap())
    });
}

fn end_to_end(c: &mut Criterion) {
    let grid = l_ligand(3, 5);
    let opts = full_options(1);
    let layout = layout_for(&grid, &opts);
    c.bench_function("verify/m1", |b| {
        b.iter(|| verify(black_box(&grid), &layout, &opts).unwrap())
    });
}

criterion_group!(benches, increment, simulate, oracle, end_to_end);
criterion_main!(benches);
