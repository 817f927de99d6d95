//! End-to-end acceptance checks. Runs without the libtest harness so each
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pimkit::bnn::{amdahl_speedup, bnn_infer, lenet5, BnnModel, Layer, SpeedupInputs, Tensor};
use pimkit::mensa::{run_model, synthetic_suite, System};
use pimkit::pum::{
    allocate, execute_program, MajCircuit, MajGate, NodeId, OperandBinding, PumError, SubarrayConfig,
    SubarrayState, TimingModel,
};
use pimkit::roofline::{attainable_energy_efficiency, attainable_throughput, MachineModel};
use pimkit::simdram::{throughput_report, ArithOp, LaneVector, MiscOp, OpKind, OpProgram, OpShape, ReduceOp, RelOp};
use pimkit::upmem::{gemv_execute, gemv_time_model, DataType, DpuSystemConfig, GemvElement, GemvProblem, GemvShape};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- 1

fn lane_mask(bits: u32) -> u64 {
    if bits == 64 {
        u64::MAX
    } else {
        (1 << bits) - 1
    }
}

fn as_int(v: u64, bits: u32, signed: bool) -> i128 {
    if signed && v >> (bits - 1) & 1 == 1 {
        v as i128 - (1i128 << bits)
    } else {
        v as i128
    }
}

fn wrap(v: i128, bits: u32) -> u64 {
    (v.rem_euclid(1i128 << bits)) as u64
}

/// Scalar semantics written independently of the library's own reference.
fn oracle(kind: OpKind, bits: u32, signed: bool, shift: u32, ops: &[u64]) -> u64 {
    let m = lane_mask(bits);
    let v = |i: usize| as_int(ops[i], bits, signed);
    let sv = |i: usize| as_int(ops[i], bits, true);
    let b = |x: bool| x as u64;
    match kind {
        OpKind::Arith(ArithOp::Add) => wrap(v(0) + v(1), bits),
        OpKind::Arith(ArithOp::Sub) => wrap(v(0) - v(1), bits),
        OpKind::Arith(ArithOp::Mul) => (ops[0] as u128).wrapping_mul(ops[1] as u128) as u64 & m,
        OpKind::Arith(ArithOp::Div) => wrap(v(0) / v(1), bits),
        OpKind::Arith(ArithOp::Abs) => wrap(sv(0).abs(), bits),
        OpKind::Rel(RelOp::Eq) => b(ops[0] == ops[1]),
        OpKind::Rel(RelOp::Neq) => b(ops[0] != ops[1]),
        OpKind::Rel(RelOp::Gt) => b(v(0) > v(1)),
        OpKind::Rel(RelOp::Lt) => b(v(0) < v(1)),
        OpKind::Rel(RelOp::Geq) => b(v(0) >= v(1)),
        OpKind::Rel(RelOp::Max) => wrap((0..ops.len()).map(v).max().unwrap(), bits),
        OpKind::Rel(RelOp::Min) => wrap((0..ops.len()).map(v).min().unwrap(), bits),
        OpKind::Reduce(ReduceOp::And) => ops.iter().fold(m, |a, x| a & x),
        OpKind::Reduce(ReduceOp::Or) => ops.iter().fold(0, |a, x| a | x),
        OpKind::Reduce(ReduceOp::Xor) => ops.iter().fold(0, |a, x| a ^ x),
        OpKind::Misc(MiscOp::BitCount) => ops[0].count_ones() as u64,
        OpKind::Misc(MiscOp::Relu) => wrap(sv(0).max(0), bits),
        OpKind::Misc(MiscOp::IfThenElse) => {
            if ops[0] & 1 == 1 {
                ops[1]
            } else {
                ops[2]
            }
        }
        OpKind::Misc(MiscOp::Xnor) => !(ops[0] ^ ops[1]) & m,
        OpKind::ShiftLeft => wrap((ops[0] as i128) << shift, bits),
    }
}

fn operand_range(kind: OpKind, index: usize, bits: u32) -> Vec<u64> {
    match (kind, index) {
        (OpKind::Misc(MiscOp::IfThenElse), 0) => vec![0, 1],
        (OpKind::Arith(ArithOp::Div), 1) => (1..1u64 << bits).collect(),
        _ => (0..1u64 << bits).collect(),
    }
}

fn random_operand(kind: OpKind, index: usize, bits: u32, rng: &mut ChaCha8Rng) -> u64 {
    match (kind, index) {
        (OpKind::Misc(MiscOp::IfThenElse), 0) => rng.gen_range(0..2),
        (OpKind::Arith(ArithOp::Div), 1) => loop {
            // bias towards small divisors so quotients are not almost always 0
            let v = rng.gen::<u64>() >> rng.gen_range(0..bits) & lane_mask(bits);
            if v != 0 {
                break v;
            }
        },
        _ => rng.gen::<u64>() & lane_mask(bits),
    }
}

/// Runs one shape over the given operand columns; returns mismatch count.
fn mismatches(shape: OpShape, columns: &[Vec<u64>]) -> Result<usize, String> {
    let program = OpProgram::build(shape, SubarrayConfig::default()).map_err(|e| format!("{shape:?}: {e}"))?;
    let inputs: Vec<LaneVector> = columns
        .iter()
        .map(|c| LaneVector::new(shape.bits, shape.signed, c.clone()).unwrap())
        .collect();
    let refs: Vec<&LaneVector> = inputs.iter().collect();
    let got = program.run(&refs).map_err(|e| format!("{shape:?}: {e}"))?;
    let mut ops = vec![0; columns.len()];
    Ok((0..got.len())
        .filter(|&lane| {
            for (o, c) in ops.iter_mut().zip(columns) {
                *o = c[lane];
            }
            got.values()[lane] != oracle(shape.kind, shape.bits, shape.signed, shape.shift, &ops)
        })
        .count())
}

fn shapes_for(kind: OpKind, bits: u32, signed: bool) -> OpShape {
    let shift = if kind == OpKind::ShiftLeft { bits / 3 } else { 0 };
    OpShape::new(kind, bits).signed(signed).shift(shift)
}

fn criterion_1() -> Check {
    let mut jobs = Vec::new();
    for kind in OpKind::ALL {
        for signed in [false, true] {
            for bits in [8, 16, 32, 64] {
                jobs.push((kind, signed, bits));
            }
        }
    }
    let results: Vec<Result<(usize, usize), String>> = jobs
        .par_iter()
        .enumerate()
        .map(|(j, &(kind, signed, bits))| {
            let shape = shapes_for(kind, bits, signed);
            let columns: Vec<Vec<u64>> = if bits == 8 {
                let ranges: Vec<Vec<u64>> = (0..shape.arity).map(|i| operand_range(kind, i, 8)).collect();
                let total: usize = ranges.iter().map(Vec::len).product();
                let mut cols = vec![Vec::with_capacity(total); ranges.len()];
                for mut idx in 0..total {
                    for (col, r) in cols.iter_mut().zip(&ranges).rev() {
                        col.push(r[idx % r.len()]);
                        idx /= r.len();
                    }
                }
                cols
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + j as u64);
                (0..shape.arity)
                    .map(|i| (0..10_000).map(|_| random_operand(kind, i, bits, &mut rng)).collect())
                    .collect()
            };
            let cases = columns[0].len();
            let bad = mismatches(shape, &columns)?;
            if bad > 0 {
                return Err(format!("{kind} {bits}-bit signed={signed}: {bad}/{cases} mismatches"));
            }
            Ok((cases, usize::from(bits == 8 && shape.arity == 2 && kind != OpKind::Arith(ArithOp::Div))))
        })
        .collect();
    let mut total = 0;
    let mut full_pairs = 0;
    for r in results {
        let (cases, pair) = r?;
        total += cases;
        full_pairs += pair;
    }
    Ok(format!(
        "{} op/width/signedness combinations, {total} lanes, 0 mismatches ({full_pairs} binary ops x 65,536 pairs)",
        jobs.len()
    ))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Check {
    let one = TimingModel::default();
    let sixteen = TimingModel::default().with_banks(16).map_err(|e| e.to_string())?;
    let mut n = 0;
    for kind in OpKind::ALL {
        for bits in [8, 16, 32, 64] {
            let a = throughput_report(kind, bits, &one).map_err(|e| e.to_string())?;
            let b = throughput_report(kind, bits, &sixteen).map_err(|e| e.to_string())?;
            ensure(b.throughput == 16.0 * a.throughput, || {
                format!("{kind}/{bits}: {} vs 16 x {}", b.throughput, a.throughput)
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} operation/width pairs scale exactly 16x"))
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Check {
    let t = TimingModel::default();
    let add = throughput_report(OpKind::Arith(ArithOp::Add), 32, &t).map_err(|e| e.to_string())?.throughput;
    let shift = throughput_report(OpKind::ShiftLeft, 32, &t).map_err(|e| e.to_string())?.throughput;
    ensure((add / 20.1e9 - 1.0).abs() <= 0.05, || format!("add32 = {:.3} Gops/s", add / 1e9))?;
    ensure(shift >= 10.0 * add, || format!("shift/add = {:.1}", shift / add))?;
    Ok(format!("add32 {:.2} Gops/s, shift/add {:.0}x", add / 1e9, shift / add))
}

// ---------------------------------------------------------------- 4

fn criterion_4() -> Check {
    let s = |c, k| SpeedupInputs::new(c, k).map(amdahl_speedup).map_err(|e| e.to_string());
    let main = s(0.9, 10.0)?;
    // 10 / (10 * 0.1 + 0.9) = 10 / 1.9
    ensure((main - 10.0 / 1.9).abs() <= 1e-4 && (main - 5.2632).abs() <= 1e-4, || format!("got {main}"))?;
    for k in [1.0, 2.5, 10.0, 1e6] {
        ensure(s(0.0, k)? == 1.0, || format!("(0, {k}) != 1"))?;
        ensure(s(1.0, k)? == k, || format!("(1, {k}) != {k}"))?;
    }
    Ok(format!("amdahl(0.9, 10) = {main:.4}; boundaries exact"))
}

// ---------------------------------------------------------------- 5

/// Integer forward pass over ±1 values via xnor/popcount counting.
fn bnn_oracle(model: &BnnModel, input: &Tensor) -> (Vec<Vec<i64>>, Vec<f64>) {
    let mut values: Vec<f64> = input.data.clone();
    let mut shape = input.shape;
    let mut trace = Vec::new();
    let mut last_alpha: Option<&[f64]> = None;
    for (layer, &out) in model.layers().iter().zip(model.shapes()) {
        let bits: Vec<bool> = values.iter().map(|&x| x >= 0.0).collect();
        let next: Vec<i64> = match layer {
            Layer::Conv(c) => {
                last_alpha = Some(&c.alpha);
                let [ic, ih, iw] = shape;
                let k = c.kernel;
                let mut v = Vec::new();
                for o in 0..out[0] {
                    for oy in 0..out[1] {
                        for ox in 0..out[2] {
                            let mut agree = 0i64;
                            for ch in 0..ic {
                                for ky in 0..k {
                                    for kx in 0..k {
                                        let y = (oy * c.stride + ky).checked_sub(c.pad).filter(|&y| y < ih);
                                        let x = (ox * c.stride + kx).checked_sub(c.pad).filter(|&x| x < iw);
                                        let a = match (y, x) {
                                            (Some(y), Some(x)) => bits[(ch * ih + y) * iw + x],
                                            _ => false,
                                        };
                                        let w = c.weights[o * c.window() + (ch * k + ky) * k + kx];
                                        agree += i64::from(a == w);
                                    }
                                }
                            }
                            v.push(2 * agree - c.window() as i64);
                        }
                    }
                }
                v
            }
            Layer::Dense(d) => {
                last_alpha = Some(&d.alpha);
                (0..d.outputs)
                    .map(|o| {
                        let agree = (0..d.inputs).filter(|&i| bits[i] == d.weights[o * d.inputs + i]).count();
                        2 * agree as i64 - d.inputs as i64
                    })
                    .collect()
            }
            Layer::MaxPool(s) => {
                let [c, h, w] = out;
                let iw = shape[2];
                let ih = shape[1];
                let mut v = Vec::new();
                for ch in 0..c {
                    for y in 0..h {
                        for x in 0..w {
                            let m = (0..s * s)
                                .map(|i| values[(ch * ih + y * s + i / s) * iw + x * s + i % s])
                                .fold(f64::NEG_INFINITY, f64::max);
                            v.push(m as i64);
                        }
                    }
                }
                v
            }
            Layer::Sign => {
                last_alpha = None;
                bits.iter().map(|&b| if b { 1 } else { -1 }).collect()
            }
        };
        values = next.iter().map(|&x| x as f64).collect();
        shape = out;
        trace.push(next);
    }
    let per = shape[1] * shape[2];
    let scores = match last_alpha {
        Some(alpha) => values.iter().enumerate().map(|(i, &x)| x * alpha[i / per]).collect(),
        None => values,
    };
    (trace, scores)
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let model = lenet5(&mut rng);
    let shape = model.input_shape();
    let inputs: Vec<Tensor> = (0..20)
        .map(|_| Tensor::new(shape, (0..shape.iter().product()).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap())
        .collect();
    let got = bnn_infer(&model, &inputs).map_err(|e| e.to_string())?;
    for (i, (inf, input)) in got.iter().zip(&inputs).enumerate() {
        let (trace, scores) = bnn_oracle(&model, input);
        for (l, (t, want)) in inf.layers.iter().zip(&trace).enumerate() {
            let have: Vec<i64> = t.data.iter().map(|&x| x as i64).collect();
            ensure(t.data.iter().all(|x| x.fract() == 0.0) && &have == want, || {
                format!("input {i}, layer {l} differs")
            })?;
        }
        ensure(inf.scores == scores, || format!("input {i}: scores differ"))?;
    }
    Ok(format!("20 LeNet-5 inputs bit-exact across {} layers", model.layers().len()))
}

// ---------------------------------------------------------------- 6

fn oracle_gemv<T: Copy + Into<i64>>(rows: usize, cols: usize, m: &[T], v: &[T]) -> Vec<i32> {
    (0..rows)
        .map(|r| (0..cols).fold(0i64, |acc, c| acc.wrapping_add(m[r * cols + c].into().wrapping_mul(v[c].into()))) as i32)
        .collect()
}

fn gemv_cases<T>(rng: &mut ChaCha8Rng, gen: impl Fn(&mut ChaCha8Rng) -> T) -> Result<(), String>
where
    T: GemvElement<Acc = i32> + Into<i64>,
{
    for case in 0..100 {
        let rows = rng.gen_range(1..300);
        let cols = rng.gen_range(1..300);
        let dpus = rng.gen_range(1..80);
        let m: Vec<T> = (0..rows * cols).map(|_| gen(rng)).collect();
        let v: Vec<T> = (0..cols).map(|_| gen(rng)).collect();
        let want = oracle_gemv(rows, cols, &m, &v);
        let p = GemvProblem::new(rows, cols, m, v).map_err(|e| e.to_string())?;
        let got = gemv_execute(&p, &DpuSystemConfig::with_dpus(dpus)).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("{} case {case} ({rows}x{cols}, {dpus} DPUs) differs", T::DTYPE))?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    gemv_cases::<i8>(&mut rng, |r| r.gen())?;
    gemv_cases::<i16>(&mut rng, |r| r.gen())?;
    gemv_cases::<i32>(&mut rng, |r| r.gen())?;

    let shape = |dtype| GemvShape { rows: 8192, cols: 4096, dtype };
    for dtype in DataType::ALL {
        for k in [1, 2, 4, 64, 512, 2048] {
            let t = |d| gemv_time_model(&shape(dtype), &DpuSystemConfig::with_dpus(d)).unwrap();
            ensure(t(2 * k) == t(k) / 2.0, || format!("{dtype}: {k} -> {} DPUs not exactly halved", 2 * k))?;
        }
    }
    let cfg = DpuSystemConfig::default();
    let t = |d| gemv_time_model(&shape(d), &cfg).unwrap();
    let ratios = [
        (t(DataType::I32) / t(DataType::I16), 1.75),
        (t(DataType::I32) / t(DataType::I8), 2.17),
        (t(DataType::F32) / t(DataType::I32), 10.0),
    ];
    for (got, want) in ratios {
        ensure((got - want).abs() <= 1e-12 * want, || format!("ratio {got} != {want}"))?;
    }
    Ok("300 integer problems exact; DPU doubling halves time; ratios 1.75/2.17/10".into())
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Check {
    let m = MachineModel::edge_tpu();
    ensure(m.ridge_point() == m.peak_throughput / m.mem_bandwidth, || "ridge point".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let i = 10f64.powf(rng.gen_range(-3.0..6.0));
        let want = m.peak_throughput.min(i * m.mem_bandwidth);
        let got = attainable_throughput(i, &m);
        ensure(got == want, || format!("I = {i}: {got} != {want}"))?;
    }
    let e = attainable_energy_efficiency(1e6, &m).map_err(|e| e.to_string())?;
    let limit = 1.0 / m.e_flop;
    let rel = (e - limit).abs() / limit;
    ensure(rel <= 1e-3, || format!("asymptote off by {rel:.2e}"))?;
    Ok(format!("1000 intensities exact; energy roof at 1e6 within {:.3}%", rel * 100.0))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Check {
    let mut lines = Vec::new();
    for model in synthetic_suite() {
        let [base, hb, mensa] = System::ALL.map(|s| run_model(&model, s).unwrap());
        let (eb, eh, em) = (base.energy.total(), hb.energy.total(), mensa.energy.total());
        let (ub, uh, um) = (base.utilization, hb.utilization, mensa.utilization);
        ensure(em < eh && eh < eb, || format!("{}: energy {em:e} {eh:e} {eb:e}", model.name))?;
        ensure(um > uh && uh > ub, || format!("{}: utilization {um} {uh} {ub}", model.name))?;
        lines.push(format!("{} E {:.2}x U {:.0}/{:.0}/{:.0}%", model.name, eb / em, ub * 100.0, uh * 100.0, um * 100.0));
    }
    Ok(lines.join("; "))
}

// ---------------------------------------------------------------- 9

/// Random MAJ/NOT circuit with inputs first, then constants, then logic.
fn random_circuit(rng: &mut ChaCha8Rng) -> MajCircuit {
    let inputs = rng.gen_range(1..=5);
    let mut gates: Vec<MajGate> = (0..inputs).map(MajGate::Input).collect();
    if rng.gen_bool(0.5) {
        gates.push(MajGate::Const(rng.gen()));
    }
    let logic = rng.gen_range(1..=30);
    let window = rng.gen_range(2..=12);
    for _ in 0..logic {
        let n = gates.len();
        let pick = |rng: &mut ChaCha8Rng| NodeId(rng.gen_range(n.saturating_sub(window)..n));
        let g = if rng.gen_bool(0.25) {
            MajGate::Not(pick(rng))
        } else {
            MajGate::Maj(pick(rng), pick(rng), pick(rng))
        };
        gates.push(g);
    }
    let n = gates.len();
    let outs = rng.gen_range(1..=3);
    let mut outputs: Vec<NodeId> = (0..outs).map(|_| NodeId(rng.gen_range(n - logic..n))).collect();
    outputs.sort();
    outputs.dedup();
    MajCircuit::new(gates, outputs, inputs).unwrap()
}

/// Peak number of compute rows needed: gates reachable from an output are
/// scheduled in order; intermediates occupy a row from definition to last
/// read, a majority needs three operand rows, a NOT a fresh destination
/// row plus its operand's row when that read is the last.
fn live_width(c: &MajCircuit) -> usize {
    let gates = c.gates();
    let mut needed = vec![false; gates.len()];
    for o in c.outputs() {
        needed[o.0] = true;
    }
    for i in (0..gates.len()).rev() {
        if needed[i] {
            for op in gates[i].operands() {
                needed[op.0] = true;
            }
        }
    }
    let logic: Vec<usize> = (0..gates.len()).filter(|&i| needed[i] && gates[i].is_logic()).collect();
    let mut last_use = vec![None; gates.len()];
    for &g in &logic {
        for op in gates[g].operands() {
            if gates[op.0].is_logic() {
                last_use[op.0] = Some(g);
            }
        }
    }
    logic
        .iter()
        .map(|&g| {
            let through = logic
                .iter()
                .filter(|&&v| v < g && last_use[v].is_some_and(|u| u > g))
                .count();
            match gates[g] {
                MajGate::Maj(..) => through + 3,
                MajGate::Not(a) => through + usize::from(gates[a.0].is_logic() && last_use[a.0] == Some(g)) + 1,
                _ => unreachable!(),
            }
        })
        .max()
        .unwrap_or(0)
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut ok, mut rejected) = (0, 0);
    for case in 0..1000 {
        let circuit = random_circuit(&mut rng);
        let budget = rng.gen_range(3..=8);
        let config = SubarrayConfig::new(32, 256, budget).unwrap();
        let layout = config.layout();
        let ins: Vec<usize> = (0..circuit.num_inputs()).collect();
        let outs: Vec<usize> = (0..circuit.outputs().len()).map(|i| 10 + i).collect();
        let width = live_width(&circuit);
        match allocate(&circuit, &OperandBinding::new(ins.clone(), outs.clone()), &layout) {
            Err(PumError::InsufficientRows { .. }) => {
                ensure(width > budget, || format!("case {case}: rejected with width {width} <= {budget}"))?;
                rejected += 1;
            }
            Err(e) => return Err(format!("case {case}: {e}")),
            Ok(alloc) => {
                ensure(width <= budget, || format!("case {case}: accepted with width {width} > {budget}"))?;
                ensure(alloc.peak_rows <= budget, || format!("case {case}: peak {} > {budget}", alloc.peak_rows))?;
                let mut state = SubarrayState::new(config).unwrap();
                let words = state.words_per_row();
                let values: Vec<Vec<u64>> = ins.iter().map(|_| (0..words).map(|_| rng.gen()).collect()).collect();
                for (&row, v) in ins.iter().zip(&values) {
                    state.write_row(row, v).unwrap();
                }
                execute_program(&alloc.program, &mut state).map_err(|e| format!("case {case}: {e}"))?;
                for w in 0..words {
                    let lane: Vec<u64> = values.iter().map(|v| v[w]).collect();
                    let want = circuit.eval_words(&lane).unwrap();
                    for (o, &row) in outs.iter().enumerate() {
                        ensure(state.row(row).unwrap()[w] == want[o], || format!("case {case}: output {o} wrong"))?;
                    }
                }
                ok += 1;
            }
        }
    }
    ensure(ok > 100 && rejected > 100, || format!("unbalanced sample: {ok} allocated, {rejected} rejected"))?;
    Ok(format!("{ok} allocated and replayed correctly, {rejected} rejected exactly when width > budget"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("PUM correctness", criterion_1),
        ("bank scaling", criterion_2),
        ("throughput calibration", criterion_3),
        ("Amdahl formula", criterion_4),
        ("BNN equivalence", criterion_5),
        ("GEMV", criterion_6),
        ("roofline", criterion_7),
        ("accelerator orderings", criterion_8),
        ("allocator safety", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
