//! One function per experiment. Each resolves its parameters (flag, then
//! config file, then built-in default) and returns reports to emit.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pimkit::bnn::{amdahl_speedup, bnn_infer, lenet5, reference_infer, BnnModel, SpeedupInputs, Tensor};
use pimkit::layer::read_layers_csv;
use pimkit::mensa::{run_model, schedule_layers, synthetic_suite, ModelGraph, System};
use pimkit::pum::TimingModel;
use pimkit::roofline::{sweep, MachineModel};
use pimkit::simdram::verify::{verify_exhaustive, verify_random};
use pimkit::simdram::{throughput_report, OpKind, OpShape};
use pimkit::upmem::{
    comparison_report, gemv_execute, gemv_reference, gemv_time_model, read_matrix_binary, read_matrix_csv,
    DataType, DpuSystemConfig, GemvElement, GemvProblem, GemvShape, Matrix, MatrixData, MATRIX_MAGIC,
};

use crate::config::ConfigFile;
use crate::report::{num, Report};

pub struct Outcome {
    pub reports: Vec<Report>,
    /// non-empty means the experiment ran but found a failure
    pub errors: Vec<String>,
}

impl From<Vec<Report>> for Outcome {
    fn from(reports: Vec<Report>) -> Self {
        Self {
            reports,
            errors: Vec::new(),
        }
    }
}

/// Parameters shared by every experiment.
pub struct Ctx<'a> {
    pub seed: u64,
    pub config: Option<&'a ConfigFile>,
}

impl Ctx<'_> {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn int(&self, s: &str, k: &str) -> Option<i64> {
        self.config.and_then(|c| c.int(s, k))
    }
    fn float(&self, s: &str, k: &str) -> Option<f64> {
        self.config.and_then(|c| c.float(s, k))
    }
    fn boolean(&self, s: &str, k: &str) -> Option<bool> {
        self.config.and_then(|c| c.boolean(s, k))
    }
    fn text(&self, s: &str, k: &str) -> Option<String> {
        self.config.and_then(|c| c.text(s, k))
    }
    fn int_list(&self, s: &str, k: &str) -> Option<Vec<i64>> {
        self.config.and_then(|c| c.int_list(s, k))
    }
    fn text_list(&self, s: &str, k: &str) -> Option<Vec<String>> {
        self.config.and_then(|c| c.text_list(s, k))
    }
}

fn parse_ops(names: Option<Vec<String>>) -> Result<Vec<OpKind>> {
    match names {
        None => Ok(OpKind::ALL.to_vec()),
        Some(names) if names.iter().any(|n| n.eq_ignore_ascii_case("all")) => Ok(OpKind::ALL.to_vec()),
        Some(names) => names
            .iter()
            .map(|n| n.parse::<OpKind>().map_err(|e| anyhow!("{e}")))
            .collect(),
    }
}

fn widths(list: Option<Vec<i64>>, default: u32) -> Vec<u32> {
    list.map_or(vec![default], |v| v.into_iter().map(|b| b as u32).collect())
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    /// Operations to check (comma-separated names, or `all`)
    #[arg(long, value_delimiter = ',')]
    pub op: Option<Vec<String>>,
    /// Element widths; 8-bit runs exhaustively
    #[arg(long, value_delimiter = ',')]
    pub bits: Option<Vec<i64>>,
    #[arg(long)]
    pub signed: Option<bool>,
    /// Random lanes per operation at widths above 8
    #[arg(long)]
    pub vectors: Option<usize>,
    /// Shift amount for `shiftleft`
    #[arg(long)]
    pub shift: Option<u32>,
}

pub fn verify(args: &VerifyArgs, ctx: &Ctx) -> Result<Outcome> {
    let ops = parse_ops(args.op.clone().or_else(|| ctx.text_list("verify", "ops")))?;
    let bits = widths(args.bits.clone().or_else(|| ctx.int_list("verify", "bits")), 8);
    let signed = args.signed.or_else(|| ctx.boolean("verify", "signed")).unwrap_or(false);
    let vectors = args
        .vectors
        .or_else(|| ctx.int("verify", "vectors").map(|v| v as usize))
        .unwrap_or(10_000);
    let shift = args.shift.or_else(|| ctx.int("verify", "shift").map(|v| v as u32)).unwrap_or(1);
    let mut rng = ctx.rng();
    let mut report = Report::new("verify", &["op", "bits", "signed", "mode", "cases", "mismatches"]);
    let mut errors = Vec::new();
    for &kind in &ops {
        for &b in &bits {
            let shape = OpShape::new(kind, b).signed(signed).shift(if kind == OpKind::ShiftLeft { shift } else { 0 });
            let (mode, outcome) = if b <= 8 {
                ("exhaustive", verify_exhaustive(shape))
            } else {
                ("random", verify_random(shape, vectors, &mut rng))
            };
            let outcome = outcome.with_context(|| format!("verifying {kind} at {b} bits"))?;
            report.push(vec![
                kind.name().into(),
                b.to_string(),
                signed.to_string(),
                mode.into(),
                outcome.cases.to_string(),
                outcome.mismatches.to_string(),
            ]);
            report.note(format!("{kind}/{b}: {} cases, {} mismatches", outcome.cases, outcome.mismatches));
            if let Some(m) = outcome.first_mismatch {
                errors.push(format!(
                    "{kind}/{b}: operands {:?} gave {} instead of {}",
                    m.operands, m.got, m.expected
                ));
            }
        }
    }
    Ok(Outcome {
        reports: vec![report],
        errors,
    })
}

#[derive(Debug, Default, Args)]
pub struct ThroughputArgs {
    #[arg(long, value_delimiter = ',')]
    pub op: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    pub bits: Option<Vec<i64>>,
    #[arg(long)]
    pub banks: Option<u32>,
}

pub fn throughput(args: &ThroughputArgs, ctx: &Ctx) -> Result<Outcome> {
    let ops = parse_ops(args.op.clone().or_else(|| ctx.text_list("throughput", "ops")))?;
    let bits = widths(args.bits.clone().or_else(|| ctx.int_list("throughput", "bits")), 32);
    let banks = args
        .banks
        .or_else(|| ctx.int("throughput", "banks").map(|b| b as u32))
        .unwrap_or(1);
    let timing = TimingModel::default().with_banks(banks)?;
    let mut report = Report::new(
        "throughput",
        &["op", "bits", "banks", "copies", "tra", "not", "initc", "latency_s", "ops_per_s"],
    );
    for &kind in &ops {
        for &b in &bits {
            let cost = throughput_report(kind, b, &timing).with_context(|| format!("costing {kind} at {b} bits"))?;
            let c = cost.counts;
            report.push(vec![
                kind.name().into(),
                b.to_string(),
                banks.to_string(),
                c.copies.to_string(),
                c.triple_activations.to_string(),
                c.not_activations.to_string(),
                c.constant_inits.to_string(),
                num(cost.latency),
                num(cost.throughput),
            ]);
            report.note(format!("{kind}/{b} x{banks} banks: {:.3} Gops/s", cost.throughput / 1e9));
        }
    }
    Ok(vec![report].into())
}

#[derive(Debug, Default, Args)]
pub struct AmdahlArgs {
    /// Fraction of runtime spent in the accelerated kernels
    #[arg(long)]
    pub conv_time: Option<f64>,
    /// Speedup of the accelerated kernels
    #[arg(long)]
    pub speedup: Option<f64>,
}

pub fn bnn_amdahl(args: &AmdahlArgs, ctx: &Ctx) -> Result<Outcome> {
    let c = args.conv_time.or_else(|| ctx.float("bnn", "conv_time")).unwrap_or(0.9);
    let s = args.speedup.or_else(|| ctx.float("bnn", "speedup")).unwrap_or(10.0);
    let speedup = amdahl_speedup(SpeedupInputs::new(c, s)?);
    let mut report = Report::new("bnn_amdahl", &["conv_time", "kernel_speedup", "end_to_end_speedup"]);
    report.push(vec![c.to_string(), s.to_string(), num(speedup)]);
    report.note(format!("end-to-end speedup: {speedup:.3}"));
    Ok(vec![report].into())
}

#[derive(Debug, Default, Args)]
pub struct InferArgs {
    /// Number of random input images
    #[arg(long)]
    pub inputs: Option<usize>,
    /// Model description file (random LeNet-5 when absent)
    #[arg(long, requires = "weights")]
    pub model: Option<String>,
    /// Packed weight bits for `--model`
    #[arg(long)]
    pub weights: Option<String>,
}

fn argmax(v: &[f64]) -> usize {
    v.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, &x)| if x > best.1 { (i, x) } else { best })
        .0
}

pub fn bnn_infer_cmd(args: &InferArgs, ctx: &Ctx) -> Result<Outcome> {
    let count = args
        .inputs
        .or_else(|| ctx.int("bnn", "inputs").map(|v| v as usize))
        .unwrap_or(20);
    let mut rng = ctx.rng();
    let model = match (args.model.clone().or_else(|| ctx.text("bnn", "model")), args.weights.clone().or_else(|| ctx.text("bnn", "weights"))) {
        (Some(m), Some(w)) => {
            let desc = fs::read_to_string(&m).with_context(|| format!("reading {m}"))?;
            let bytes = fs::read(&w).with_context(|| format!("reading {w}"))?;
            BnnModel::parse(&desc, &bytes)?
        }
        (None, None) => lenet5(&mut rng),
        _ => bail!("a BNN model needs both a description and a weights file"),
    };
    let shape = model.input_shape();
    let inputs = (0..count)
        .map(|_| {
            let data = (0..shape.iter().product()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            Tensor::new(shape, data)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let pum = bnn_infer(&model, &inputs)?;
    let host = reference_infer(&model, &inputs)?;
    let mut report = Report::new("bnn_infer", &["input", "pum_class", "reference_class", "identical"]);
    let mut errors = Vec::new();
    for (i, (p, h)) in pum.iter().zip(&host).enumerate() {
        let same = p.scores == h.scores && p.layers == h.layers;
        if !same {
            errors.push(format!("input {i}: PUM result differs from the host reference"));
        }
        report.push(vec![
            i.to_string(),
            argmax(&p.scores).to_string(),
            argmax(&h.scores).to_string(),
            same.to_string(),
        ]);
    }
    report.note(format!(
        "{} of {count} inputs identical to the host reference",
        count - errors.len()
    ));
    Ok(Outcome {
        reports: vec![report],
        errors,
    })
}

#[derive(Debug, Default, Args)]
pub struct MensaArgs {
    /// Layer CSV (the built-in synthetic suite when absent)
    #[arg(long)]
    pub model: Option<String>,
    /// `from,to` edge list naming layers; a chain when absent
    #[arg(long)]
    pub edges: Option<String>,
    /// Systems to evaluate: baseline, base+hb, mensa-g
    #[arg(long, value_delimiter = ',')]
    pub system: Option<Vec<String>>,
}

pub fn mensa(args: &MensaArgs, ctx: &Ctx) -> Result<Outcome> {
    let models = match args.model.clone().or_else(|| ctx.text("mensa", "model")) {
        None => synthetic_suite(),
        Some(path) => {
            let file = fs::File::open(&path).with_context(|| format!("opening {path}"))?;
            let layers = read_layers_csv(file)?;
            let name = Path::new(&path)
                .file_stem()
                .map_or_else(|| "model".into(), |s| s.to_string_lossy().into_owned());
            let edges = match args.edges.clone().or_else(|| ctx.text("mensa", "edges")) {
                Some(e) => fs::read_to_string(&e).with_context(|| format!("reading {e}"))?,
                None => String::new(),
            };
            vec![ModelGraph::with_named_edges(name, layers, &edges)?]
        }
    };
    let systems = match args.system.clone().or_else(|| ctx.text_list("mensa", "systems")) {
        None => System::ALL.to_vec(),
        Some(names) => names.iter().map(|n| n.parse()).collect::<std::result::Result<_, _>>()?,
    };
    let mut totals = Report::new(
        "mensa",
        &[
            "model", "system", "latency_s", "inferences_per_s", "utilization", "energy_j", "pe_j",
            "act_buffer_j", "param_buffer_j", "offchip_j", "noc_j", "static_j",
        ],
    );
    let mut layers = Report::new(
        "mensa_layers",
        &[
            "model", "system", "layer", "accelerator", "family", "compute_s", "memory_s", "latency_s",
            "utilization", "energy_j",
        ],
    );
    for model in &models {
        for w in schedule_layers(model)?.warnings {
            totals.note(format!("{}: {w}", model.name));
        }
        for &system in &systems {
            let r = run_model(model, system).with_context(|| format!("evaluating {} on {system}", model.name))?;
            let mut row = vec![
                model.name.clone(),
                system.to_string(),
                num(r.latency),
                num(r.throughput),
                num(r.utilization),
                num(r.energy.total()),
            ];
            row.extend(r.energy.joules().iter().map(|&j| num(j)));
            totals.push(row);
            totals.note(format!(
                "{} on {system}: {:.3} uJ, utilization {:.1}%, {:.1} inferences/s",
                model.name,
                r.energy.total() * 1e6,
                r.utilization * 100.0,
                r.throughput
            ));
            for l in &r.layers {
                layers.push(vec![
                    model.name.clone(),
                    system.to_string(),
                    l.name.clone(),
                    l.accelerator.clone(),
                    l.family.to_string(),
                    num(l.compute_time),
                    num(l.memory_time),
                    num(l.latency),
                    num(l.utilization),
                    num(l.energy.total()),
                ]);
            }
        }
    }
    layers.note(format!("{} layer evaluations", layers.rows.len()));
    Ok(vec![totals, layers].into())
}

#[derive(Debug, Default, Args)]
pub struct ScaleArgs {
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// i8, i16, i32 or f32 (all four when absent)
    #[arg(long)]
    pub dtype: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub dpus: Option<Vec<i64>>,
}

fn dpu_list(flag: Option<Vec<i64>>, ctx: &Ctx, default: &[usize]) -> Vec<usize> {
    flag.or_else(|| ctx.int_list("upmem", "dpus"))
        .map_or_else(|| default.to_vec(), |v| v.into_iter().map(|d| d as usize).collect())
}

pub fn upmem_scale(args: &ScaleArgs, ctx: &Ctx) -> Result<Outcome> {
    let rows = args.rows.or_else(|| ctx.int("upmem", "rows").map(|v| v as usize)).unwrap_or(8192);
    let cols = args.cols.or_else(|| ctx.int("upmem", "cols").map(|v| v as usize)).unwrap_or(8192);
    let dtypes = match args.dtype.clone().or_else(|| ctx.text("upmem", "dtype")) {
        Some(d) => vec![d.parse::<DataType>()?],
        None => DataType::ALL.to_vec(),
    };
    let dpus = dpu_list(args.dpus.clone(), ctx, &[64, 128, 256, 512, 1024, 2048]);
    let mut report = Report::new("upmem_scale", &["dtype", "dpus", "rows", "cols", "time_s", "speedup"]);
    for &dtype in &dtypes {
        let shape = GemvShape { rows, cols, dtype };
        let mut first = None;
        for &d in &dpus {
            let cfg = DpuSystemConfig::with_dpus(d);
            pimkit::upmem::gemv_partition(&shape, &cfg)?;
            let t = gemv_time_model(&shape, &cfg)?;
            let base = *first.get_or_insert(t);
            report.push(vec![
                dtype.to_string(),
                d.to_string(),
                rows.to_string(),
                cols.to_string(),
                num(t),
                num(base / t),
            ]);
        }
    }
    report.note(format!("{rows}x{cols} GEMV, {} DPU counts", dpus.len()));
    Ok(vec![report].into())
}

#[derive(Debug, Default, Args)]
pub struct GemvArgs {
    /// Matrix file, binary (PGMV header) or CSV; random when absent
    #[arg(long)]
    pub matrix: Option<String>,
    /// Vector as a one-row or one-column CSV; random when absent
    #[arg(long)]
    pub vector: Option<String>,
    #[arg(long)]
    pub dtype: Option<String>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub dpus: Option<usize>,
}

fn load_matrix(path: &str, dtype: DataType) -> Result<Matrix> {
    let bytes = fs::read(path).with_context(|| format!("reading {path}"))?;
    Ok(if bytes.starts_with(MATRIX_MAGIC) {
        read_matrix_binary(&bytes[..])?
    } else {
        read_matrix_csv(&bytes[..], dtype)?
    })
}

fn random_data<R: Rng>(dtype: DataType, n: usize, rng: &mut R) -> MatrixData {
    match dtype {
        DataType::I8 => MatrixData::I8((0..n).map(|_| rng.gen()).collect()),
        DataType::I16 => MatrixData::I16((0..n).map(|_| rng.gen()).collect()),
        DataType::I32 => MatrixData::I32((0..n).map(|_| rng.gen_range(-1 << 15..1 << 15)).collect()),
        DataType::F32 => MatrixData::F32((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()),
    }
}

fn run_gemv<T: GemvElement>(
    rows: usize,
    cols: usize,
    m: Vec<T>,
    v: Vec<T>,
    cfg: &DpuSystemConfig,
) -> Result<(Vec<T::Acc>, Vec<T::Acc>)> {
    let p = GemvProblem::new(rows, cols, m, v)?;
    Ok((gemv_execute(&p, cfg)?, gemv_reference(&p)))
}

pub fn upmem_gemv(args: &GemvArgs, ctx: &Ctx) -> Result<Outcome> {
    let dtype: DataType = args
        .dtype
        .clone()
        .or_else(|| ctx.text("upmem", "dtype"))
        .map_or(Ok(DataType::I32), |d| d.parse())?;
    let dpus = args
        .dpus
        .or_else(|| dpu_list(None, ctx, &[64]).first().copied())
        .unwrap_or(64);
    let cfg = DpuSystemConfig::with_dpus(dpus);
    let mut rng = ctx.rng();
    let matrix = match args.matrix.clone().or_else(|| ctx.text("upmem", "matrix")) {
        Some(path) => load_matrix(&path, dtype)?,
        None => {
            let rows = args.rows.or_else(|| ctx.int("upmem", "rows").map(|v| v as usize)).unwrap_or(512);
            let cols = args.cols.or_else(|| ctx.int("upmem", "cols").map(|v| v as usize)).unwrap_or(512);
            Matrix {
                rows,
                cols,
                data: random_data(dtype, rows * cols, &mut rng),
            }
        }
    };
    let vector = match args.vector.clone().or_else(|| ctx.text("upmem", "vector")) {
        Some(path) => load_matrix(&path, matrix.data.dtype())?.data,
        None => random_data(matrix.data.dtype(), matrix.cols, &mut rng),
    };
    let (rows, cols) = (matrix.rows, matrix.cols);
    let (values, agree): (Vec<String>, bool) = match (matrix.data, vector) {
        (MatrixData::I8(m), MatrixData::I8(v)) => {
            let (got, want) = run_gemv(rows, cols, m, v, &cfg)?;
            (got.iter().map(ToString::to_string).collect(), got == want)
        }
        (MatrixData::I16(m), MatrixData::I16(v)) => {
            let (got, want) = run_gemv(rows, cols, m, v, &cfg)?;
            (got.iter().map(ToString::to_string).collect(), got == want)
        }
        (MatrixData::I32(m), MatrixData::I32(v)) => {
            let (got, want) = run_gemv(rows, cols, m, v, &cfg)?;
            (got.iter().map(ToString::to_string).collect(), got == want)
        }
        (MatrixData::F32(m), MatrixData::F32(v)) => {
            let (got, want) = run_gemv(rows, cols, m, v, &cfg)?;
            let close = got
                .iter()
                .zip(&want)
                .all(|(g, w)| (g - w).abs() <= 1e-5 * w.abs().max(1.0));
            (got.iter().map(ToString::to_string).collect(), close)
        }
        _ => bail!("matrix and vector element types differ"),
    };
    let time = gemv_time_model(&GemvShape { rows, cols, dtype }, &cfg)?;
    let mut report = Report::new("upmem_gemv", &["row", "value"]);
    for (i, v) in values.into_iter().enumerate() {
        report.push(vec![i.to_string(), v]);
    }
    report.note(format!("{rows}x{cols} {dtype} on {dpus} DPUs, modeled kernel time {time:.6e} s"));
    report.note(format!("matches sequential reference: {agree}"));
    let errors = if agree {
        Vec::new()
    } else {
        vec!["partitioned GEMV differs from the sequential reference".into()]
    };
    Ok(Outcome {
        reports: vec![report],
        errors,
    })
}

#[derive(Debug, Default, Args)]
pub struct CompareArgs {
    /// Measured or modeled PIM time in seconds
    #[arg(long)]
    pub pim_time: Option<f64>,
    /// Reference as `name=seconds`; repeatable
    #[arg(long = "ref")]
    pub references: Vec<String>,
    /// Row to normalize to (`pim` or a reference name; default the first reference)
    #[arg(long)]
    pub normalize_to: Option<String>,
}

pub fn upmem_compare(args: &CompareArgs, ctx: &Ctx) -> Result<Outcome> {
    let pim = args
        .pim_time
        .or_else(|| ctx.float("upmem", "pim_time"))
        .ok_or_else(|| anyhow!("a PIM time is required (--pim-time or upmem.pim_time)"))?;
    let raw = if args.references.is_empty() {
        ctx.text_list("upmem", "references").unwrap_or_default()
    } else {
        args.references.clone()
    };
    let references = raw
        .iter()
        .map(|r| {
            let (name, t) = r
                .split_once('=')
                .ok_or_else(|| anyhow!("reference `{r}` is not `name=seconds`"))?;
            let t: f64 = t.trim().parse().with_context(|| format!("reference `{r}`"))?;
            Ok((name.trim().to_string(), t))
        })
        .collect::<Result<Vec<_>>>()?;
    let target = args.normalize_to.clone().or_else(|| ctx.text("upmem", "normalize_to"));
    let rows = comparison_report(pim, &references, target.as_deref())?;
    let mut report = Report::new("upmem_compare", &["name", "time_s", "normalized", "pim_speedup"]);
    for r in &rows {
        report.push(vec![r.name.clone(), num(r.time), num(r.normalized), num(r.pim_speedup)]);
        if r.name != "pim" {
            report.note(format!("PIM is {:.2}x faster than {}", r.pim_speedup, r.name));
        }
    }
    Ok(vec![report].into())
}

#[derive(Debug, Default, Args)]
pub struct RooflineArgs {
    /// Lowest arithmetic intensity (flop/byte)
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Peak throughput in flop/s
    #[arg(long)]
    pub peak: Option<f64>,
    /// Memory bandwidth in byte/s
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Joules per flop
    #[arg(long)]
    pub e_flop: Option<f64>,
    /// Joules per off-chip byte
    #[arg(long)]
    pub e_byte: Option<f64>,
}

pub fn roofline(args: &RooflineArgs, ctx: &Ctx) -> Result<Outcome> {
    let pick = |flag: Option<f64>, key: &str, default: f64| flag.or_else(|| ctx.float("roofline", key)).unwrap_or(default);
    let base = MachineModel::edge_tpu();
    let machine = MachineModel {
        peak_throughput: pick(args.peak, "peak", base.peak_throughput),
        mem_bandwidth: pick(args.bandwidth, "bandwidth", base.mem_bandwidth),
        e_flop: pick(args.e_flop, "e_flop", base.e_flop),
        e_byte: pick(args.e_byte, "e_byte", base.e_byte),
        ..base
    };
    let lo = pick(args.lo, "lo", 0.01);
    let hi = pick(args.hi, "hi", 1e4);
    let points = args
        .points
        .or_else(|| ctx.int("roofline", "points").map(|v| v as usize))
        .unwrap_or(100);
    let curve = sweep(&machine, lo, hi, points)?;
    let mut report = Report::new("roofline", &["intensity", "attainable_flops", "flops_per_joule"]);
    for p in &curve {
        report.push(vec![num(p.intensity), num(p.attainable), num(p.energy_efficiency)]);
    }
    report.note(format!("ridge point {:.3} flop/byte", machine.ridge_point()));
    Ok(vec![report].into())
}
