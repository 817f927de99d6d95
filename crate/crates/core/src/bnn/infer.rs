use super::dot::DotKernel;
use super::model::{BnnModel, Layer, Tensor};
use super::{BnnError, Result};
use crate::pum::SubarrayConfig;

/// Per-layer outputs and final scores for one input.
#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    /// Output of every layer, in order; binary layers hold integer dot
    /// products, sign layers ±1.
    pub layers: Vec<Tensor>,
    /// Final layer output scaled by the last parameter layer's per-channel
    /// scale (unscaled when a sign layer follows it).
    pub scores: Vec<f64>,
}

fn check_inputs(model: &BnnModel, inputs: &[Tensor]) -> Result<()> {
    for t in inputs {
        if t.shape != model.input_shape() || t.data.len() != t.shape.iter().product::<usize>() {
            return Err(BnnError::ShapeMismatch {
                expected: model.input_shape(),
                found: t.shape,
            });
        }
    }
    Ok(())
}

fn bit(x: f64) -> bool {
    x >= 0.0
}

fn max_pool(t: &Tensor, size: usize, shape: [usize; 3]) -> Tensor {
    let [c, h, w] = shape;
    let [_, ih, iw] = t.shape;
    let mut data = Vec::with_capacity(c * h * w);
    for ch in 0..c {
        for oy in 0..h {
            for ox in 0..w {
                let mut best = f64::NEG_INFINITY;
                for dy in 0..size {
                    for dx in 0..size {
                        best = best.max(t.data[(ch * ih + oy * size + dy) * iw + ox * size + dx]);
                    }
                }
                data.push(best);
            }
        }
    }
    Tensor { shape, data }
}

fn sign(t: &Tensor) -> Tensor {
    Tensor {
        shape: t.shape,
        data: t.data.iter().map(|&x| if bit(x) { 1.0 } else { -1.0 }).collect(),
    }
}

fn scores(model: &BnnModel, last: &Tensor) -> Vec<f64> {
    for layer in model.layers().iter().rev() {
        let alpha = match layer {
            Layer::Sign => break,
            Layer::MaxPool(_) => continue,
            Layer::Conv(c) => &c.alpha,
            Layer::Dense(d) => &d.alpha,
        };
        let per_channel = last.shape[1] * last.shape[2];
        return last
            .data
            .iter()
            .enumerate()
            .map(|(i, &x)| x * alpha[i / per_channel])
            .collect();
    }
    last.data.clone()
}

fn finish(model: &BnnModel, per_input: Vec<Vec<Tensor>>) -> Vec<Inference> {
    per_input
        .into_iter()
        .map(|layers| {
            let scores = match layers.last() {
                Some(last) => scores(model, last),
                None => Vec::new(),
            };
            Inference { layers, scores }
        })
        .collect()
}

/// Run every input through `model`, evaluating binary layers on the
/// in-DRAM path. Inputs are batched into shared lane vectors per layer.
pub fn bnn_infer(model: &BnnModel, inputs: &[Tensor]) -> Result<Vec<Inference>> {
    check_inputs(model, inputs)?;
    if inputs.is_empty() {
        return Ok(Vec::new());
    }
    let kernel = DotKernel::new(SubarrayConfig::default())?;
    let mut current: Vec<Tensor> = inputs.to_vec();
    let mut traces: Vec<Vec<Tensor>> = vec![Vec::new(); inputs.len()];

    for (layer, &shape) in model.layers().iter().zip(model.shapes()) {
        current = match layer {
            Layer::Conv(conv) => {
                let [oc, oh, ow] = shape;
                let window = conv.window();
                let windows: Vec<Vec<Vec<bool>>> = current
                    .iter()
                    .map(|t| {
                        let [ic, ih, iw] = t.shape;
                        let mut out = Vec::with_capacity(oh * ow);
                        for oy in 0..oh {
                            for ox in 0..ow {
                                let mut bits = Vec::with_capacity(window);
                                for c in 0..ic {
                                    for ky in 0..conv.kernel {
                                        for kx in 0..conv.kernel {
                                            let y = (oy * conv.stride + ky).checked_sub(conv.pad);
                                            let x = (ox * conv.stride + kx).checked_sub(conv.pad);
                                            bits.push(match (y, x) {
                                                (Some(y), Some(x)) if y < ih && x < iw => {
                                                    bit(t.data[(c * ih + y) * iw + x])
                                                }
                                                _ => false,
                                            });
                                        }
                                    }
                                }
                                out.push(bits);
                            }
                        }
                        out
                    })
                    .collect();
                let mut pairs = Vec::with_capacity(inputs.len() * oc * oh * ow);
                for per_input in &windows {
                    for filter in conv.weights.chunks(window) {
                        for w in per_input {
                            pairs.push((w.as_slice(), filter));
                        }
                    }
                }
                let dots = kernel.dot_batch(&pairs)?;
                dots.chunks(oc * oh * ow)
                    .map(|d| Tensor {
                        shape,
                        data: d.iter().map(|&v| v as f64).collect(),
                    })
                    .collect()
            }
            Layer::Dense(dense) => {
                let flat: Vec<Vec<bool>> = current
                    .iter()
                    .map(|t| t.data.iter().map(|&x| bit(x)).collect())
                    .collect();
                let mut pairs = Vec::with_capacity(inputs.len() * dense.outputs);
                for x in &flat {
                    for row in dense.weights.chunks(dense.inputs) {
                        pairs.push((x.as_slice(), row));
                    }
                }
                let dots = kernel.dot_batch(&pairs)?;
                dots.chunks(dense.outputs)
                    .map(|d| Tensor {
                        shape,
                        data: d.iter().map(|&v| v as f64).collect(),
                    })
                    .collect()
            }
            Layer::MaxPool(size) => current.iter().map(|t| max_pool(t, *size, shape)).collect(),
            Layer::Sign => current.iter().map(sign).collect(),
        };
        for (trace, t) in traces.iter_mut().zip(&current) {
            trace.push(t.clone());
        }
    }
    Ok(finish(model, traces))
}

/// Host-only evaluation with plain ±1 arithmetic.
pub fn reference_infer(model: &BnnModel, inputs: &[Tensor]) -> Result<Vec<Inference>> {
    check_inputs(model, inputs)?;
    let pm = |x: bool| if x { 1i64 } else { -1 };
    let traces = inputs
        .iter()
        .map(|input| {
            let mut t = input.clone();
            let mut trace = Vec::new();
            for (layer, &shape) in model.layers().iter().zip(model.shapes()) {
                t = match layer {
                    Layer::Conv(cv) => {
                        let [oc, oh, ow] = shape;
                        let [ic, ih, iw] = t.shape;
                        let k = cv.kernel;
                        let mut data = Vec::with_capacity(oc * oh * ow);
                        for o in 0..oc {
                            for oy in 0..oh {
                                for ox in 0..ow {
                                    let mut acc = 0i64;
                                    for c in 0..ic {
                                        for ky in 0..k {
                                            for kx in 0..k {
                                                let y = (oy * cv.stride + ky) as isize - cv.pad as isize;
                                                let x = (ox * cv.stride + kx) as isize - cv.pad as isize;
                                                let inside = y >= 0 && x >= 0 && (y as usize) < ih && (x as usize) < iw;
                                                let a = inside && bit(t.data[(c * ih + y as usize) * iw + x as usize]);
                                                let w = cv.weights[((o * ic + c) * k + ky) * k + kx];
                                                acc += pm(a) * pm(w);
                                            }
                                        }
                                    }
                                    data.push(acc as f64);
                                }
                            }
                        }
                        Tensor { shape, data }
                    }
                    Layer::Dense(d) => {
                        let data = (0..d.outputs)
                            .map(|o| {
                                (0..d.inputs)
                                    .map(|i| pm(bit(t.data[i])) * pm(d.weights[o * d.inputs + i]))
                                    .sum::<i64>() as f64
                            })
                            .collect();
                        Tensor { shape, data }
                    }
                    Layer::MaxPool(size) => max_pool(&t, *size, shape),
                    Layer::Sign => sign(&t),
                };
                trace.push(t.clone());
            }
            trace
        })
        .collect();
    Ok(finish(model, traces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnn::model::{BinConv2d, BinDense};

    #[test]
    fn one_by_one_identity_conv() {
        // 1x1 kernel with weight +1: output = +1 where the input bit is set
        let model = BnnModel::new(
            [1, 2, 3],
            vec![Layer::Conv(BinConv2d {
                out_channels: 1,
                in_channels: 1,
                kernel: 1,
                stride: 1,
                pad: 0,
                weights: vec![true],
                alpha: vec![0.5],
            })],
        )
        .unwrap();
        let input = Tensor::new([1, 2, 3], vec![1.0, -1.0, 0.0, -0.5, 2.0, -3.0]).unwrap();
        let out = bnn_infer(&model, &[input.clone()]).unwrap();
        assert_eq!(out[0].layers[0].data, vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_eq!(out[0].scores, vec![0.5, -0.5, 0.5, -0.5, 0.5, -0.5]);
        assert_eq!(out, reference_infer(&model, &[input]).unwrap());
    }

    #[test]
    fn empty_batch_and_shape_errors() {
        let model = BnnModel::new(
            [1, 1, 4],
            vec![Layer::Dense(BinDense {
                outputs: 1,
                inputs: 4,
                weights: vec![true; 4],
                alpha: vec![1.0],
            })],
        )
        .unwrap();
        assert!(bnn_infer(&model, &[]).unwrap().is_empty());
        let wrong = Tensor::new([1, 2, 2], vec![0.0; 4]).unwrap();
        assert!(matches!(bnn_infer(&model, &[wrong]), Err(BnnError::ShapeMismatch { .. })));
    }
}
