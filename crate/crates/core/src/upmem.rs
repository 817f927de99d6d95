//! UPMEM-style near-bank processor system: row-partitioned GEMV with a
//! host-side gather, a cycle-count time model and matrix file formats.

use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum UpmemError {
    #[error("matrix and vector dimensions must be at least 1 (got {rows}x{cols})")]
    EmptyProblem { rows: usize, cols: usize },
    #[error("expected {expected} elements, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("DPU {dpu} needs {needed} bytes of MRAM but has {available}")]
    CapacityExceeded { dpu: usize, needed: u64, available: u64 },
    #[error("invalid system configuration: {0}")]
    InvalidConfig(String),
    #[error("reference time for `{0}` must be positive")]
    ZeroReference(String),
    #[error("no reference named `{0}`")]
    UnknownReference(String),
    #[error("unknown datatype `{0}` (expected i8, i16, i32 or f32)")]
    UnknownDataType(String),
    #[error("bad matrix file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, UpmemError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DataType {
    I8,
    I16,
    I32,
    F32,
}

impl DataType {
    pub const ALL: [DataType; 4] = [DataType::I8, DataType::I16, DataType::I32, DataType::F32];

    pub fn bytes(self) -> u64 {
        match self {
            DataType::I8 => 1,
            DataType::I16 => 2,
            DataType::I32 | DataType::F32 => 4,
        }
    }

    pub fn code(self) -> u8 {
        match self {
            DataType::I8 => 0,
            DataType::I16 => 1,
            DataType::I32 => 2,
            DataType::F32 => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            DataType::I8 => "i8",
            DataType::I16 => "i16",
            DataType::I32 => "i32",
            DataType::F32 => "f32",
        }
    }
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DataType {
    type Err = UpmemError;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let alias = match lower.as_str() {
            "int8" => "i8",
            "int16" => "i16",
            "int32" => "i32",
            "float" | "float32" => "f32",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|d| d.name() == alias)
            .ok_or_else(|| UpmemError::UnknownDataType(s.to_string()))
    }
}

/// Speed of the narrower integer kernels relative to 32-bit.
pub const I16_SPEEDUP: f64 = 1.75;
pub const I8_SPEEDUP: f64 = 2.17;
/// Slowdown of software-emulated float relative to 32-bit integer.
pub const DEFAULT_FLOAT_SLOWDOWN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DpuSystemConfig {
    pub n_dpus: usize,
    pub mram_per_dpu: u64,
    pub wram_per_dpu: u64,
    /// Hz
    pub frequency: f64,
    /// i32 multiply-accumulate cost with all tasklets busy
    pub cycles_per_element_i32: f64,
    pub float_slowdown: f64,
    /// byte/s for host <-> MRAM copies; `None` leaves them out of the model
    pub transfer_bandwidth: Option<f64>,
}

impl Default for DpuSystemConfig {
    fn default() -> Self {
        Self {
            n_dpus: 2048,
            mram_per_dpu: 64 << 20,
            wram_per_dpu: 64 << 10,
            frequency: 428e6,
            cycles_per_element_i32: 16.0,
            float_slowdown: DEFAULT_FLOAT_SLOWDOWN,
            transfer_bandwidth: None,
        }
    }
}

impl DpuSystemConfig {
    pub fn with_dpus(n_dpus: usize) -> Self {
        Self {
            n_dpus,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(UpmemError::InvalidConfig(m.to_string()));
        if self.n_dpus == 0 {
            return bad("n_dpus must be at least 1");
        }
        if self.mram_per_dpu == 0 || self.wram_per_dpu == 0 {
            return bad("memory capacities must be positive");
        }
        for (name, v) in [
            ("frequency", self.frequency),
            ("cycles_per_element_i32", self.cycles_per_element_i32),
            ("float_slowdown", self.float_slowdown),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(UpmemError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if let Some(bw) = self.transfer_bandwidth {
            if !(bw.is_finite() && bw > 0.0) {
                return bad("transfer_bandwidth must be positive");
            }
        }
        Ok(())
    }

    pub fn cycles_per_element(&self, dtype: DataType) -> f64 {
        let c = self.cycles_per_element_i32;
        match dtype {
            DataType::I32 => c,
            DataType::I16 => c / I16_SPEEDUP,
            DataType::I8 => c / I8_SPEEDUP,
            DataType::F32 => c * self.float_slowdown,
        }
    }
}

/// Dimensions and element type; all the time model needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GemvShape {
    pub rows: usize,
    pub cols: usize,
    pub dtype: DataType,
}

/// Element types a DPU kernel accumulates. Integer types accumulate in a
/// wrapping `i32`.
pub trait GemvElement: Copy + Send + Sync + 'static {
    const DTYPE: DataType;
    type Acc: Copy + Send + Sync + PartialEq + fmt::Debug + 'static;
    fn zero() -> Self::Acc;
    fn mac(acc: Self::Acc, a: Self, b: Self) -> Self::Acc;
}

macro_rules! int_element {
    ($t:ty, $d:expr) => {
        impl GemvElement for $t {
            const DTYPE: DataType = $d;
            type Acc = i32;
            fn zero() -> i32 {
                0
            }
            fn mac(acc: i32, a: $t, b: $t) -> i32 {
                acc.wrapping_add((a as i32).wrapping_mul(b as i32))
            }
        }
    };
}

int_element!(i8, DataType::I8);
int_element!(i16, DataType::I16);
int_element!(i32, DataType::I32);

impl GemvElement for f32 {
    const DTYPE: DataType = DataType::F32;
    type Acc = f32;
    fn zero() -> f32 {
        0.0
    }
    fn mac(acc: f32, a: f32, b: f32) -> f32 {
        acc + a * b
    }
}

/// Row-major matrix and the vector it multiplies.
#[derive(Debug, Clone, PartialEq)]
pub struct GemvProblem<T> {
    rows: usize,
    cols: usize,
    matrix: Vec<T>,
    vector: Vec<T>,
}

impl<T: GemvElement> GemvProblem<T> {
    pub fn new(rows: usize, cols: usize, matrix: Vec<T>, vector: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(UpmemError::EmptyProblem { rows, cols });
        }
        if matrix.len() != rows * cols {
            return Err(UpmemError::LengthMismatch {
                expected: rows * cols,
                found: matrix.len(),
            });
        }
        if vector.len() != cols {
            return Err(UpmemError::LengthMismatch {
                expected: cols,
                found: vector.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            matrix,
            vector,
        })
    }

    pub fn shape(&self) -> GemvShape {
        GemvShape {
            rows: self.rows,
            cols: self.cols,
            dtype: T::DTYPE,
        }
    }

    pub fn matrix(&self) -> &[T] {
        &self.matrix
    }

    pub fn vector(&self) -> &[T] {
        &self.vector
    }

    fn row_dot(&self, r: usize) -> T::Acc {
        self.matrix[r * self.cols..(r + 1) * self.cols]
            .iter()
            .zip(&self.vector)
            .fold(T::zero(), |acc, (&a, &b)| T::mac(acc, a, b))
    }
}

/// Contiguous row blocks, one per DPU; the first `rows % n_dpus` blocks take
/// one extra row. Every DPU holds its block plus a full copy of the vector.
pub fn gemv_partition(shape: &GemvShape, cfg: &DpuSystemConfig) -> Result<Vec<Range<usize>>> {
    cfg.validate()?;
    if shape.rows == 0 || shape.cols == 0 {
        return Err(UpmemError::EmptyProblem {
            rows: shape.rows,
            cols: shape.cols,
        });
    }
    let base = shape.rows / cfg.n_dpus;
    let extra = shape.rows % cfg.n_dpus;
    let elem = shape.dtype.bytes();
    let mut start = 0;
    let mut blocks = Vec::with_capacity(cfg.n_dpus);
    for dpu in 0..cfg.n_dpus {
        let len = base + usize::from(dpu < extra);
        let needed = (len as u64 + 1) * shape.cols as u64 * elem;
        if needed > cfg.mram_per_dpu {
            return Err(UpmemError::CapacityExceeded {
                dpu,
                needed,
                available: cfg.mram_per_dpu,
            });
        }
        blocks.push(start..start + len);
        start += len;
    }
    Ok(blocks)
}

/// Each DPU computes its block independently; the host concatenates the
/// partial results in DPU order.
pub fn gemv_execute<T: GemvElement>(p: &GemvProblem<T>, cfg: &DpuSystemConfig) -> Result<Vec<T::Acc>> {
    let blocks = gemv_partition(&p.shape(), cfg)?;
    let partials: Vec<Vec<T::Acc>> = blocks
        .par_iter()
        .map(|rows| rows.clone().map(|r| p.row_dot(r)).collect())
        .collect();
    Ok(partials.concat())
}

/// Sequential single-processor GEMV.
pub fn gemv_reference<T: GemvElement>(p: &GemvProblem<T>) -> Vec<T::Acc> {
    (0..p.rows).map(|r| p.row_dot(r)).collect()
}

/// Kernel time of the most loaded DPU, plus host transfers when a transfer
/// bandwidth is configured.
pub fn gemv_time_model(shape: &GemvShape, cfg: &DpuSystemConfig) -> Result<f64> {
    cfg.validate()?;
    let rows_per_dpu = shape.rows.div_ceil(cfg.n_dpus) as f64;
    let kernel = rows_per_dpu * shape.cols as f64 * cfg.cycles_per_element(shape.dtype) / cfg.frequency;
    let transfer = cfg.transfer_bandwidth.map_or(0.0, |bw| {
        let elem = shape.dtype.bytes() as f64;
        let bytes = (shape.rows * shape.cols) as f64 * elem
            + (cfg.n_dpus * shape.cols) as f64 * elem
            + shape.rows as f64 * 4.0;
        bytes / bw
    });
    Ok(kernel + transfer)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub name: String,
    pub time: f64,
    /// time divided by the chosen reference's time
    pub normalized: f64,
    /// how many times faster the PIM run is than this row
    pub pim_speedup: f64,
}

/// Normalizes the PIM time and each reference to `normalize_to` (the first
/// reference when `None`). The first row is the PIM run, named "pim".
pub fn comparison_report(
    pim_time: f64,
    references: &[(String, f64)],
    normalize_to: Option<&str>,
) -> Result<Vec<ComparisonRow>> {
    if !(pim_time.is_finite() && pim_time > 0.0) {
        return Err(UpmemError::ZeroReference("pim".into()));
    }
    for (name, t) in references {
        if !(t.is_finite() && *t > 0.0) {
            return Err(UpmemError::ZeroReference(name.clone()));
        }
    }
    let base = match normalize_to {
        Some("pim") => pim_time,
        Some(name) => references
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, t)| t)
            .ok_or_else(|| UpmemError::UnknownReference(name.to_string()))?,
        None => references.first().map_or(pim_time, |&(_, t)| t),
    };
    Ok(std::iter::once(("pim".to_string(), pim_time))
        .chain(references.iter().cloned())
        .map(|(name, time)| ComparisonRow {
            name,
            time,
            normalized: time / base,
            pim_speedup: time / pim_time,
        })
        .collect())
}

/// Matrix contents of any supported element type.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixData {
    I8(Vec<i8>),
    I16(Vec<i16>),
    I32(Vec<i32>),
    F32(Vec<f32>),
}

impl MatrixData {
    pub fn dtype(&self) -> DataType {
        match self {
            MatrixData::I8(_) => DataType::I8,
            MatrixData::I16(_) => DataType::I16,
            MatrixData::I32(_) => DataType::I32,
            MatrixData::F32(_) => DataType::F32,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MatrixData::I8(v) => v.len(),
            MatrixData::I16(v) => v.len(),
            MatrixData::I32(v) => v.len(),
            MatrixData::F32(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn parse(dtype: DataType, fields: &[String]) -> Result<Self> {
        fn all<T: FromStr>(fields: &[String]) -> Result<Vec<T>> {
            fields
                .iter()
                .map(|f| {
                    f.trim()
                        .parse()
                        .map_err(|_| UpmemError::Format(format!("`{f}` is not a valid element")))
                })
                .collect()
        }
        Ok(match dtype {
            DataType::I8 => MatrixData::I8(all(fields)?),
            DataType::I16 => MatrixData::I16(all(fields)?),
            DataType::I32 => MatrixData::I32(all(fields)?),
            DataType::F32 => MatrixData::F32(all(fields)?),
        })
    }

    fn to_strings(&self) -> Vec<String> {
        match self {
            MatrixData::I8(v) => v.iter().map(ToString::to_string).collect(),
            MatrixData::I16(v) => v.iter().map(ToString::to_string).collect(),
            MatrixData::I32(v) => v.iter().map(ToString::to_string).collect(),
            MatrixData::F32(v) => v.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: MatrixData,
}

/// Binary layout: `PGMV`, version (1), dtype code, two reserved bytes,
/// rows and cols as little-endian u32, then row-major little-endian data.
pub const MATRIX_MAGIC: &[u8; 4] = b"PGMV";
pub const MATRIX_VERSION: u8 = 1;

pub fn write_matrix_binary<W: Write>(mut w: W, m: &Matrix) -> Result<()> {
    let dims = |v: usize| u32::try_from(v).map_err(|_| UpmemError::Format(format!("dimension {v} exceeds u32")));
    w.write_all(MATRIX_MAGIC)?;
    w.write_all(&[MATRIX_VERSION, m.data.dtype().code(), 0, 0])?;
    w.write_all(&dims(m.rows)?.to_le_bytes())?;
    w.write_all(&dims(m.cols)?.to_le_bytes())?;
    let bytes: Vec<u8> = match &m.data {
        MatrixData::I8(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
        MatrixData::I16(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
        MatrixData::I32(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
        MatrixData::F32(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
    };
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_matrix_binary<R: Read>(mut r: R) -> Result<Matrix> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)
        .map_err(|_| UpmemError::Format("truncated header".into()))?;
    if &header[..4] != MATRIX_MAGIC {
        return Err(UpmemError::Format("missing PGMV magic".into()));
    }
    if header[4] != MATRIX_VERSION {
        return Err(UpmemError::Format(format!("unsupported version {}", header[4])));
    }
    let dtype = DataType::from_code(header[5])
        .ok_or_else(|| UpmemError::Format(format!("unknown dtype code {}", header[5])))?;
    let rows = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
    let count = rows * cols;
    let mut body = Vec::new();
    r.read_to_end(&mut body)?;
    let expected = count * dtype.bytes() as usize;
    if body.len() != expected {
        return Err(UpmemError::LengthMismatch {
            expected,
            found: body.len(),
        });
    }
    macro_rules! decode {
        ($t:ty, $n:expr) => {
            body.chunks_exact($n)
                .map(|c| <$t>::from_le_bytes(c.try_into().unwrap()))
                .collect()
        };
    }
    let data = match dtype {
        DataType::I8 => MatrixData::I8(decode!(i8, 1)),
        DataType::I16 => MatrixData::I16(decode!(i16, 2)),
        DataType::I32 => MatrixData::I32(decode!(i32, 4)),
        DataType::F32 => MatrixData::F32(decode!(f32, 4)),
    };
    Ok(Matrix { rows, cols, data })
}

/// Headerless CSV, one matrix row per record.
pub fn read_matrix_csv<R: Read>(r: R, dtype: DataType) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut fields = Vec::new();
    let mut rows = 0;
    let mut cols = None;
    for record in reader.records() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(UpmemError::Format(format!(
                    "row {} has {} fields, expected {c}",
                    rows + 1,
                    record.len()
                )))
            }
            _ => {}
        }
        fields.extend(record.iter().map(str::to_string));
        rows += 1;
    }
    let cols = cols.unwrap_or(0);
    Ok(Matrix {
        rows,
        cols,
        data: MatrixData::parse(dtype, &fields)?,
    })
}

pub fn write_matrix_csv<W: Write>(w: W, m: &Matrix) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let fields = m.data.to_strings();
    for row in fields.chunks(m.cols.max(1)) {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}
