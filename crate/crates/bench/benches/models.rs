use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pimkit::bnn::{bnn_infer, lenet5, Tensor};
use pimkit::mensa::{run_model, synthetic_suite, System};
use pimkit::roofline::{sweep, MachineModel};
use pimkit::upmem::{gemv_execute, DpuSystemConfig, GemvProblem};

fn mensa(c: &mut Criterion) {
    let suite = synthetic_suite();
    c.bench_function("mensa_suite_all_systems", |b| {
        b.iter(|| {
            for m in &suite {
                for s in System::ALL {
                    black_box(run_model(m, s).unwrap());
                }
            }
        })
    });
}

fn gemv(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 1024;
    let p = GemvProblem::new(n, n, (0..n * n).map(|_| rng.gen::<i8>()).collect(), (0..n).map(|_| rng.gen()).collect())
        .unwrap();
    let cfg = DpuSystemConfig::with_dpus(256);
    c.bench_function("gemv_i8_1024_on_256_dpus", |b| b.iter(|| gemv_execute(black_box(&p), &cfg).unwrap()));
}

fn bnn(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let model = lenet5(&mut rng);
    let shape = model.input_shape();
    let input = Tensor::new(shape, (0..shape.iter().product()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
    let mut g = c.benchmark_group("bnn");
    g.sample_size(10);
    g.bench_function("lenet5_single_input", |b| b.iter(|| bnn_infer(&model, std::slice::from_ref(&input)).unwrap()));
    g.finish();
}

fn roofline(c: &mut Criterion) {
    let m = MachineModel::edge_tpu();
    c.bench_function("roofline_sweep_10k", |b| b.iter(|| sweep(&m, 1e-3, 1e6, 10_000).unwrap()));
}

criterion_group!(benches, mensa, gemv, bnn, roofline);
criterion_main!(benches);
