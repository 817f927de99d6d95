use super::{BnnError, Result};
use crate::pum::SubarrayConfig;
use crate::simdram::{ArithOp, LaneVector, MiscOp, OpKind, OpProgram, OpShape};

const WORD: usize = 32;
const MAX_LEN: usize = 1 << 30;

/// Prepared 32-bit programs computing `2 * popcount(xnor(a, b)) - n` per lane.
///
/// Vectors are cut into 32-bit words; padding puts 0 in `a` and 1 in `b` so
/// padded positions never match.
#[derive(Debug, Clone)]
pub struct DotKernel {
    xnor: OpProgram,
    bitcount: OpProgram,
    add: OpProgram,
    double: OpProgram,
    sub: OpProgram,
}

impl DotKernel {
    pub fn new(config: SubarrayConfig) -> Result<Self> {
        let build = |shape: OpShape| OpProgram::build(shape, config);
        Ok(Self {
            xnor: build(OpShape::new(OpKind::Misc(MiscOp::Xnor), 32))?,
            bitcount: build(OpShape::new(OpKind::Misc(MiscOp::BitCount), 32))?,
            add: build(OpShape::new(OpKind::Arith(ArithOp::Add), 32))?,
            double: build(OpShape::new(OpKind::ShiftLeft, 32).shift(1))?,
            sub: build(OpShape::new(OpKind::Arith(ArithOp::Sub), 32))?,
        })
    }

    /// One signed dot product per pair; all pairs must share a length.
    pub fn dot_batch(&self, pairs: &[(&[bool], &[bool])]) -> Result<Vec<i64>> {
        let Some(&(first, _)) = pairs.first() else {
            return Ok(Vec::new());
        };
        let len = first.len();
        for &(a, b) in pairs {
            if a.len() != b.len() {
                return Err(BnnError::LengthMismatch {
                    left: a.len(),
                    right: b.len(),
                });
            }
            if a.len() != len {
                return Err(BnnError::LengthMismatch {
                    left: len,
                    right: a.len(),
                });
            }
        }
        if len > MAX_LEN {
            return Err(BnnError::TooLong(len));
        }
        if len == 0 {
            return Ok(vec![0; pairs.len()]);
        }

        let words = |side: usize, chunk: usize, pad: bool| -> Result<LaneVector> {
            let values = pairs
                .iter()
                .map(|pair| {
                    let bits = if side == 0 { pair.0 } else { pair.1 };
                    pack(bits, chunk, pad)
                })
                .collect();
            Ok(LaneVector::unsigned(32, values)?)
        };
        let mut acc: Option<LaneVector> = None;
        for chunk in 0..len.div_ceil(WORD) {
            let (a, b) = (words(0, chunk, false)?, words(1, chunk, true)?);
            let matches = self.xnor.run(&[&a, &b])?;
            let count = self.bitcount.run(&[&matches])?;
            acc = Some(match acc {
                None => count,
                Some(prev) => self.add.run(&[&prev, &count])?,
            });
        }
        let acc = acc.expect("at least one chunk");
        let doubled = self.double.run(&[&acc])?;
        let n = LaneVector::unsigned(32, vec![len as u64; pairs.len()])?;
        let dots = self.sub.run(&[&doubled, &n])?;
        Ok(dots.values().iter().map(|&v| v as u32 as i32 as i64).collect())
    }
}

fn pack(bits: &[bool], chunk: usize, pad: bool) -> u64 {
    (0..WORD).fold(0u64, |word, i| {
        let bit = bits.get(chunk * WORD + i).copied().unwrap_or(pad);
        word | (bit as u64) << i
    })
}

/// Dot product of two {0,1}-encoded ±1 vectors on the in-DRAM path.
pub fn bin_dot(a: &[bool], b: &[bool]) -> Result<i64> {
    let kernel = DotKernel::new(SubarrayConfig::default())?;
    Ok(kernel.dot_batch(&[(a, b)])?[0])
}

/// Host evaluation of the same product as a sum of ±1 terms.
pub fn reference_dot(a: &[bool], b: &[bool]) -> Result<i64> {
    if a.len() != b.len() {
        return Err(BnnError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let pm = |x: bool| if x { 1i64 } else { -1 };
    Ok(a.iter().zip(b).map(|(&x, &y)| pm(x) * pm(y)).sum())
}
