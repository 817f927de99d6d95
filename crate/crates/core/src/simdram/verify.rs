//! Compare compiled programs against the scalar reference.

use rand::Rng;

use super::error::Result;
use super::kind::{ArithOp, MiscOp, OpKind};
use super::lanes::{mask, LaneVector};
use super::program::{OpProgram, OpShape};
use super::reference;
use crate::pum::SubarrayConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub operands: Vec<u64>,
    pub got: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub shape: OpShape,
    pub cases: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<Mismatch>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

fn is_div(kind: OpKind) -> bool {
    kind == OpKind::Arith(ArithOp::Div)
}

fn is_select(kind: OpKind) -> bool {
    kind == OpKind::Misc(MiscOp::IfThenElse)
}

/// Runs `columns` (one vector per operand) through the compiled program.
pub fn verify_lanes(shape: OpShape, columns: &[Vec<u64>]) -> Result<VerifyOutcome> {
    let program = OpProgram::build(shape, SubarrayConfig::default())?;
    let inputs = columns
        .iter()
        .map(|c| LaneVector::new(shape.bits, shape.signed, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&LaneVector> = inputs.iter().collect();
    let got = program.run(&refs)?;
    let slices: Vec<&[u64]> = columns.iter().map(Vec::as_slice).collect();
    let want = reference::eval(shape.kind, shape.bits, shape.signed, shape.shift, &slices);
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for (lane, (&g, &w)) in got.values().iter().zip(&want).enumerate() {
        if g != w {
            mismatches += 1;
            first_mismatch.get_or_insert_with(|| Mismatch {
                operands: columns.iter().map(|c| c[lane]).collect(),
                got: g,
                expected: w,
            });
        }
    }
    Ok(VerifyOutcome {
        shape,
        cases: want.len() as u64,
        mismatches,
        first_mismatch,
    })
}

/// Every operand combination (predicates restricted to 0/1, divisors to
/// non-zero). Intended for widths up to 8 and at most three operands.
pub fn verify_exhaustive(shape: OpShape) -> Result<VerifyOutcome> {
    let values = 1u64 << shape.bits;
    let ranges: Vec<Vec<u64>> = (0..shape.arity)
        .map(|i| match (i, shape.kind) {
            (0, k) if is_select(k) => vec![0, 1],
            (1, k) if is_div(k) => (1..values).collect(),
            _ => (0..values).collect(),
        })
        .collect();
    let total: usize = ranges.iter().map(Vec::len).product();
    let mut columns = vec![Vec::with_capacity(total); shape.arity];
    for mut idx in 0..total {
        for (col, range) in columns.iter_mut().zip(&ranges).rev() {
            col.push(range[idx % range.len()]);
            idx /= range.len();
        }
    }
    verify_lanes(shape, &columns)
}

/// `cases` uniformly random lanes.
pub fn verify_random<R: Rng>(shape: OpShape, cases: usize, rng: &mut R) -> Result<VerifyOutcome> {
    let m = mask(shape.bits);
    let columns: Vec<Vec<u64>> = (0..shape.arity)
        .map(|i| {
            (0..cases)
                .map(|_| match (i, shape.kind) {
                    (0, k) if is_select(k) => rng.gen_range(0..2),
                    (1, k) if is_div(k) => loop {
                        let v = rng.gen::<u64>() & m;
                        if v != 0 {
                            break v;
                        }
                    },
                    _ => rng.gen::<u64>() & m,
                })
                .collect()
        })
        .collect();
    verify_lanes(shape, &columns)
}
