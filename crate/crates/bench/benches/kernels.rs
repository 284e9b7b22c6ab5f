use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nrcg_core::correlations::{concurrence_eof, quantum_discord, Bipartition};
use nrcg_core::linalg::{hermitian_eigen, ComplexMatrix};
use nrcg_core::sweep::{run_point, BPreparation, Simulator, SweepConfig};
use nrcg_core::C64;

fn hermitian(dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let v = C64::new(
                ((i * 7 + j * 3) % 11) as f64 / 11.0,
                if i == j {
                    0.0
                } else {
                    ((i + 2 * j) % 5) as f64 / 5.0
                },
            );
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

fn eigensolver(c: &mut Criterion) {
    let m4 = hermitian(4);
    let m8 = hermitian(8);
    c.bench_function("jacobi_4x4", |b| {
        b.iter(|| hermitian_eigen(black_box(&m4)).unwrap())
    });
    c.bench_function("jacobi_8x8", |b| {
        b.iter(|| hermitian_eigen(black_box(&m8)).unwrap())
    });
}

fn measures(c: &mut Criterion) {
    let two = run_point(&SweepConfig::for_protocol(2, 2)).unwrap().states[30].clone();
    let three = run_point(&SweepConfig::for_protocol(1, 3)).unwrap().states[70].clone();
    let ab = Bipartition::new(&[0], &[1]);
    let acb = Bipartition::new(&[0, 2], &[1]);
    c.bench_function("discord_2q", |b| {
        b.iter(|| quantum_discord(black_box(&two), &ab).unwrap())
    });
    c.bench_function("discord_3q_1q_measured", |b| {
        b.iter(|| quantum_discord(black_box(&three), &acb).unwrap())
    });
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("discord_3q_2q_measured", |b| {
        b.iter(|| quantum_discord(black_box(&three), &acb.swapped()).unwrap())
    });
    group.finish();
    c.bench_function("concurrence_eof", |b| {
        b.iter(|| concurrence_eof(black_box(&two)).unwrap())
    });
}

fn grid_cell(c: &mut Criterion) {
    for (case, q) in [(1u8, 2usize), (2, 3)] {
        let sim = Simulator::new(&SweepConfig::for_protocol(case, q)).unwrap();
        c.bench_function(&format!("grid_cell_case{case}_{q}q"), |b| {
            b.iter(|| {
                sim.cell(40.0, black_box(0.8 * PI), 0.3 * PI, BPreparation::Pure)
                    .unwrap()
            })
        });
    }
}

criterion_group!(benches, eigensolver, measures, grid_cell);
criterion_main!(benches);
