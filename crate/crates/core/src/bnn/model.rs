//! Network description.
//!
//! Text form, one layer per line (`#` starts a comment):
//!
//! ```text
//! input 1 28 28
//! conv 6 5 stride=1 pad=2
//! maxpool 2
//! sign
//! dense 10 alpha=0.7
//! ```
//!
//! `alpha=` takes one value for all filters or one per output channel and
//! defaults to 1. Weights are a separate bit stream: all parameter layers
//! in order, each row-major over (out, in, ky, kx) or (out, in), bit `i` at
//! `byte[i / 8] >> (i % 8)`. A set bit encodes +1.

use std::fmt::Write as _;

use rand::Rng;

use super::{binarize_filters, BnnError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: [usize; 3],
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: [usize; 3], data: Vec<f64>) -> Result<Self> {
        if shape.iter().product::<usize>() != data.len() {
            return Err(BnnError::InvalidLayer {
                layer: 0,
                message: format!("{} values do not fill shape {shape:?}", data.len()),
            });
        }
        Ok(Self { shape, data })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinConv2d {
    pub out_channels: usize,
    pub in_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub pad: usize,
    pub weights: Vec<bool>,
    pub alpha: Vec<f64>,
}

impl BinConv2d {
    pub fn window(&self) -> usize {
        self.in_channels * self.kernel * self.kernel
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinDense {
    pub outputs: usize,
    pub inputs: usize,
    pub weights: Vec<bool>,
    pub alpha: Vec<f64>,
}

/// Binary layers read their input through `x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Conv(BinConv2d),
    Dense(BinDense),
    MaxPool(usize),
    Sign,
}

impl Layer {
    fn output_shape(&self, index: usize, [c, h, w]: [usize; 3]) -> Result<[usize; 3]> {
        let bad = |message: String| BnnError::InvalidLayer {
            layer: index,
            message,
        };
        match self {
            Layer::Conv(conv) => {
                if conv.in_channels != c {
                    return Err(bad(format!("expects {} channels, input has {c}", conv.in_channels)));
                }
                if conv.kernel == 0 || conv.stride == 0 || conv.out_channels == 0 {
                    return Err(bad("kernel, stride and channels must be positive".into()));
                }
                let (ph, pw) = (h + 2 * conv.pad, w + 2 * conv.pad);
                if ph < conv.kernel || pw < conv.kernel {
                    return Err(bad(format!("kernel {} exceeds padded input {ph}x{pw}", conv.kernel)));
                }
                check_params(index, conv.weights.len(), conv.out_channels * conv.window(), &conv.alpha, conv.out_channels)?;
                Ok([
                    conv.out_channels,
                    (ph - conv.kernel) / conv.stride + 1,
                    (pw - conv.kernel) / conv.stride + 1,
                ])
            }
            Layer::Dense(dense) => {
                if dense.inputs != c * h * w {
                    return Err(bad(format!("expects {} inputs, got {}", dense.inputs, c * h * w)));
                }
                if dense.outputs == 0 {
                    return Err(bad("outputs must be positive".into()));
                }
                check_params(index, dense.weights.len(), dense.outputs * dense.inputs, &dense.alpha, dense.outputs)?;
                Ok([dense.outputs, 1, 1])
            }
            Layer::MaxPool(size) => {
                if *size == 0 || *size > h || *size > w {
                    return Err(bad(format!("pool size {size} does not fit {h}x{w}")));
                }
                Ok([c, h / size, w / size])
            }
            Layer::Sign => Ok([c, h, w]),
        }
    }

    fn weights(&self) -> Option<&[bool]> {
        match self {
            Layer::Conv(c) => Some(&c.weights),
            Layer::Dense(d) => Some(&d.weights),
            _ => None,
        }
    }
}

fn check_params(layer: usize, found: usize, expected: usize, alpha: &[f64], outputs: usize) -> Result<()> {
    if found != expected {
        return Err(BnnError::InvalidLayer {
            layer,
            message: format!("{found} weights given, {expected} needed"),
        });
    }
    if alpha.len() != outputs {
        return Err(BnnError::InvalidLayer {
            layer,
            message: format!("{} scales given, {outputs} needed", alpha.len()),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnnModel {
    input: [usize; 3],
    layers: Vec<Layer>,
    shapes: Vec<[usize; 3]>,
}

impl BnnModel {
    pub fn new(input: [usize; 3], layers: Vec<Layer>) -> Result<Self> {
        if input.contains(&0) {
            return Err(BnnError::EmptyTensor);
        }
        let mut shapes = Vec::with_capacity(layers.len());
        let mut shape = input;
        for (i, layer) in layers.iter().enumerate() {
            shape = layer.output_shape(i, shape)?;
            shapes.push(shape);
        }
        Ok(Self { input, layers, shapes })
    }

    pub fn input_shape(&self) -> [usize; 3] {
        self.input
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Shape after each layer.
    pub fn shapes(&self) -> &[[usize; 3]] {
        &self.shapes
    }

    pub fn output_shape(&self) -> [usize; 3] {
        self.shapes.last().copied().unwrap_or(self.input)
    }

    pub fn parse(description: &str, weights: &[u8]) -> Result<Self> {
        let mut input: Option<[usize; 3]> = None;
        let mut shape = [0; 3];
        let mut layers = Vec::new();
        let mut cursor = 0usize;
        let total_bits = weights.len() * 8;
        let mut take = |count: usize| -> Vec<bool> {
            let bits = (cursor..cursor + count)
                .map(|i| i < total_bits && (weights[i / 8] >> (i % 8)) & 1 == 1)
                .collect();
            cursor += count;
            bits
        };

        for (idx, raw) in description.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| BnnError::Parse {
                line: idx + 1,
                message,
            };
            let mut positional = Vec::new();
            let mut stride = 1;
            let mut pad = 0;
            let mut alpha: Option<Vec<f64>> = None;
            let mut words = line.split_whitespace();
            let op = words.next().unwrap_or_default();
            for word in words {
                if let Some((key, value)) = word.split_once('=') {
                    let int = || value.parse::<usize>().map_err(|e| err(format!("{key}: {e}")));
                    match key {
                        "stride" => stride = int()?,
                        "pad" => pad = int()?,
                        "alpha" => {
                            alpha = Some(
                                value
                                    .split(',')
                                    .map(|v| v.parse::<f64>().map_err(|e| err(format!("alpha: {e}"))))
                                    .collect::<Result<_>>()?,
                            )
                        }
                        _ => return Err(err(format!("unknown option `{key}`"))),
                    }
                } else {
                    positional.push(word.parse::<usize>().map_err(|e| err(format!("`{word}`: {e}")))?);
                }
            }
            let arity = |n: usize| {
                if positional.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("{op} takes {n} numbers, got {}", positional.len())))
                }
            };
            let scales = |alpha: Option<Vec<f64>>, outputs: usize| match alpha {
                None => Ok(vec![1.0; outputs]),
                Some(v) if v.len() == 1 => Ok(vec![v[0]; outputs]),
                Some(v) if v.len() == outputs => Ok(v),
                Some(v) => Err(err(format!("{} scales for {outputs} outputs", v.len()))),
            };

            if op == "input" {
                arity(3)?;
                if input.is_some() || !layers.is_empty() {
                    return Err(err("`input` must be the first line".into()));
                }
                let s = [positional[0], positional[1], positional[2]];
                input = Some(s);
                shape = s;
                continue;
            }
            if input.is_none() {
                return Err(err("model must start with `input C H W`".into()));
            }
            let layer = match op {
                "conv" => {
                    arity(2)?;
                    let (out_channels, kernel) = (positional[0], positional[1]);
                    let in_channels = shape[0];
                    Layer::Conv(BinConv2d {
                        out_channels,
                        in_channels,
                        kernel,
                        stride,
                        pad,
                        weights: take(out_channels * in_channels * kernel * kernel),
                        alpha: scales(alpha, out_channels)?,
                    })
                }
                "dense" => {
                    arity(1)?;
                    let outputs = positional[0];
                    let inputs = shape.iter().product();
                    Layer::Dense(BinDense {
                        outputs,
                        inputs,
                        weights: take(outputs * inputs),
                        alpha: scales(alpha, outputs)?,
                    })
                }
                "maxpool" => {
                    arity(1)?;
                    Layer::MaxPool(positional[0])
                }
                "sign" => {
                    arity(0)?;
                    Layer::Sign
                }
                other => return Err(err(format!("unknown layer `{other}`"))),
            };
            shape = layer
                .output_shape(layers.len(), shape)
                .map_err(|e| err(e.to_string()))?;
            layers.push(layer);
        }
        let input = input.ok_or(BnnError::Parse {
            line: 0,
            message: "missing `input` line".into(),
        })?;
        if cursor.div_ceil(8) != weights.len() {
            return Err(BnnError::WeightCount {
                expected: cursor,
                found: total_bits,
            });
        }
        Self::new(input, layers)
    }

    pub fn description(&self) -> String {
        let mut out = String::new();
        let [c, h, w] = self.input;
        writeln!(out, "input {c} {h} {w}").unwrap();
        let alpha = |a: &[f64]| {
            a.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        for layer in &self.layers {
            match layer {
                Layer::Conv(cv) => writeln!(
                    out,
                    "conv {} {} stride={} pad={} alpha={}",
                    cv.out_channels,
                    cv.kernel,
                    cv.stride,
                    cv.pad,
                    alpha(&cv.alpha)
                ),
                Layer::Dense(d) => writeln!(out, "dense {} alpha={}", d.outputs, alpha(&d.alpha)),
                Layer::MaxPool(s) => writeln!(out, "maxpool {s}"),
                Layer::Sign => writeln!(out, "sign"),
            }
            .unwrap();
        }
        out
    }

    pub fn weight_bytes(&self) -> Vec<u8> {
        let bits: Vec<bool> = self
            .layers
            .iter()
            .filter_map(Layer::weights)
            .flatten()
            .copied()
            .collect();
        let mut bytes = vec![0u8; bits.len().div_ceil(8)];
        for (i, &b) in bits.iter().enumerate() {
            bytes[i / 8] |= (b as u8) << (i % 8);
        }
        bytes
    }
}

fn random_filters<R: Rng>(rng: &mut R, outputs: usize, fan_in: usize) -> (Vec<bool>, Vec<f64>) {
    let real: Vec<f64> = (0..outputs * fan_in).map(|_| rng.gen_range(-1.0..1.0)).collect();
    binarize_filters(&real, fan_in).expect("nonempty filters")
}

/// LeNet-5 layout on a 1x28x28 input with binarized random weights.
pub fn lenet5<R: Rng>(rng: &mut R) -> BnnModel {
    let conv = |rng: &mut R, out_channels, in_channels| {
        let (weights, alpha) = random_filters(rng, out_channels, in_channels * 25);
        Layer::Conv(BinConv2d {
            out_channels,
            in_channels,
            kernel: 5,
            stride: 1,
            pad: if in_channels == 1 { 2 } else { 0 },
            weights,
            alpha,
        })
    };
    let dense = |rng: &mut R, outputs, inputs| {
        let (weights, alpha) = random_filters(rng, outputs, inputs);
        Layer::Dense(BinDense {
            outputs,
            inputs,
            weights,
            alpha,
        })
    };
    let layers = vec![
        conv(rng, 6, 1),
        Layer::MaxPool(2),
        conv(rng, 16, 6),
        Layer::MaxPool(2),
        dense(rng, 120, 400),
        dense(rng, 84, 120),
        dense(rng, 10, 84),
    ];
    BnnModel::new([1, 28, 28], layers).expect("LeNet-5 shapes chain")
}
