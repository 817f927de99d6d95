//! Binary neural-network inference on the in-DRAM operations.

mod dot;
mod infer;
mod model;

pub use dot::{bin_dot, reference_dot, DotKernel};
pub use infer::{bnn_infer, reference_infer, Inference};
pub use model::{lenet5, BinConv2d, BinDense, BnnModel, Layer, Tensor};

use thiserror::Error;

use crate::simdram::OpError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BnnError {
    #[error("tensor is empty")]
    EmptyTensor,
    #[error("bit vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("bit vectors of length {0} exceed the 30-bit accumulator")]
    TooLong(usize),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: [usize; 3],
        found: [usize; 3],
    },
    #[error("layer {layer}: {message}")]
    InvalidLayer { layer: usize, message: String },
    #[error("weight stream holds {found} bits, model needs {expected}")]
    WeightCount { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    InvalidSpeedup(String),
    #[error(transparent)]
    Op(#[from] OpError),
}

pub type Result<T, E = BnnError> = std::result::Result<T, E>;

/// Sign bits (non-negative weights map to 1) and the mean magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Binarized {
    pub bits: Vec<bool>,
    pub alpha: f64,
}

pub fn binarize(weights: &[f64]) -> Result<Binarized> {
    if weights.is_empty() {
        return Err(BnnError::EmptyTensor);
    }
    Ok(Binarized {
        bits: weights.iter().map(|&w| w >= 0.0).collect(),
        alpha: weights.iter().map(|w| w.abs()).sum::<f64>() / weights.len() as f64,
    })
}

/// Binarize consecutive filters of `filter_len` weights each, returning
/// the concatenated bits and one scale per filter.
pub fn binarize_filters(weights: &[f64], filter_len: usize) -> Result<(Vec<bool>, Vec<f64>)> {
    if weights.is_empty() || filter_len == 0 || weights.len() % filter_len != 0 {
        return Err(BnnError::EmptyTensor);
    }
    let mut bits = Vec::with_capacity(weights.len());
    let mut alphas = Vec::new();
    for filter in weights.chunks(filter_len) {
        let b = binarize(filter)?;
        bits.extend(b.bits);
        alphas.push(b.alpha);
    }
    Ok((bits, alphas))
}

/// Fraction of baseline time spent in the accelerated kernel and the
/// kernel's own speedup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedupInputs {
    conv_time: f64,
    kernel_speedup: f64,
}

impl SpeedupInputs {
    pub fn new(conv_time: f64, kernel_speedup: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&conv_time) {
            return Err(BnnError::InvalidSpeedup(format!(
                "kernel time fraction must be in [0, 1], got {conv_time}"
            )));
        }
        if !(kernel_speedup > 0.0 && kernel_speedup.is_finite()) {
            return Err(BnnError::InvalidSpeedup(format!(
                "kernel speedup must be positive, got {kernel_speedup}"
            )));
        }
        Ok(Self {
            conv_time,
            kernel_speedup,
        })
    }

    pub fn conv_time(&self) -> f64 {
        self.conv_time
    }

    pub fn kernel_speedup(&self) -> f64 {
        self.kernel_speedup
    }
}

/// End-to-end speedup `1 / ((1 - c) + c / s)`, evaluated as
/// `s / (s (1 - c) + c)` so that c = 0 and c = 1 are exact.
pub fn amdahl_speedup(inputs: SpeedupInputs) -> f64 {
    let (c, s) = (inputs.conv_time, inputs.kernel_speedup);
    s / (s * (1.0 - c) + c)
}
