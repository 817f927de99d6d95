use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pimkit::pum::{transpose_to_horizontal, transpose_to_vertical, SubarrayConfig};
use pimkit::simdram::{ArithOp, LaneVector, OpKind, OpProgram, OpShape};

fn lanes(bits: u32, n: usize, seed: u64) -> LaneVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = if bits == 64 { u64::MAX } else { (1 << bits) - 1 };
    LaneVector::unsigned(bits, (0..n).map(|_| rng.gen::<u64>() & mask).collect()).unwrap()
}

fn compile(c: &mut Criterion) {
    let mut g = c.benchmark_group("compile");
    for (kind, bits) in [
        (OpKind::Arith(ArithOp::Add), 32),
        (OpKind::Arith(ArithOp::Mul), 16),
        (OpKind::Arith(ArithOp::Div), 16),
    ] {
        g.bench_with_input(BenchmarkId::new(kind.name(), bits), &bits, |b, &bits| {
            b.iter(|| OpProgram::build(OpShape::new(kind, bits), SubarrayConfig::default()).unwrap())
        });
    }
    g.finish();
}

fn execute(c: &mut Criterion) {
    let mut g = c.benchmark_group("execute_8192_lanes");
    g.sample_size(20);
    for (kind, bits) in [(OpKind::Arith(ArithOp::Add), 32), (OpKind::Arith(ArithOp::Mul), 16)] {
        let program = OpProgram::build(OpShape::new(kind, bits), SubarrayConfig::default()).unwrap();
        let (a, b) = (lanes(bits, 8192, 1), lanes(bits, 8192, 2));
        g.bench_function(BenchmarkId::new(kind.name(), bits), |bench| {
            bench.iter(|| program.run(&[black_box(&a), black_box(&b)]).unwrap())
        });
    }
    g.finish();
}

fn transpose(c: &mut Criterion) {
    let values = lanes(32, 8192, 3).into_values();
    c.bench_function("transpose_round_trip_32x8192", |b| {
        b.iter(|| transpose_to_horizontal(&transpose_to_vertical(black_box(&values), 32, 8192).unwrap()))
    });
}

criterion_group!(benches, compile, execute, transpose);
criterion_main!(benches);
