//! Scalar host implementations used as oracles.

use super::kind::{ArithOp, MiscOp, OpKind, ReduceOp, RelOp};
use super::lanes::{mask, to_signed};

/// Evaluate one lane: `operands[i]` is the value of operand `i`.
pub fn eval_lane(kind: OpKind, bits: u32, signed: bool, shift: u32, operands: &[u64]) -> u64 {
    let m = mask(bits);
    let s = |v: u64| to_signed(v, bits);
    let gt = |x: u64, y: u64| if signed { s(x) > s(y) } else { x > y };
    let (a, b) = (operands[0], operands.get(1).copied().unwrap_or(0));
    match kind {
        OpKind::Arith(ArithOp::Add) => a.wrapping_add(b) & m,
        OpKind::Arith(ArithOp::Sub) => a.wrapping_sub(b) & m,
        OpKind::Arith(ArithOp::Mul) => a.wrapping_mul(b) & m,
        OpKind::Arith(ArithOp::Div) => {
            if signed {
                s(a).wrapping_div(s(b)) as u64 & m
            } else {
                a / b
            }
        }
        OpKind::Arith(ArithOp::Abs) => s(a).wrapping_abs() as u64 & m,
        OpKind::Rel(RelOp::Eq) => (a == b) as u64,
        OpKind::Rel(RelOp::Neq) => (a != b) as u64,
        OpKind::Rel(RelOp::Gt) => gt(a, b) as u64,
        OpKind::Rel(RelOp::Lt) => gt(b, a) as u64,
        OpKind::Rel(RelOp::Geq) => (!gt(b, a)) as u64,
        OpKind::Rel(RelOp::Max) => operands[1..]
            .iter()
            .fold(a, |acc, &x| if gt(x, acc) { x } else { acc }),
        OpKind::Rel(RelOp::Min) => operands[1..]
            .iter()
            .fold(a, |acc, &x| if gt(acc, x) { x } else { acc }),
        OpKind::Reduce(op) => operands[1..].iter().fold(a, |acc, &x| match op {
            ReduceOp::And => acc & x,
            ReduceOp::Or => acc | x,
            ReduceOp::Xor => acc ^ x,
        }),
        OpKind::Misc(MiscOp::BitCount) => a.count_ones() as u64,
        OpKind::Misc(MiscOp::Relu) => {
            if s(a) < 0 {
                0
            } else {
                a
            }
        }
        OpKind::Misc(MiscOp::IfThenElse) => {
            if a == 1 {
                b
            } else {
                operands[2]
            }
        }
        OpKind::Misc(MiscOp::Xnor) => !(a ^ b) & m,
        OpKind::ShiftLeft => {
            if shift >= 64 {
                0
            } else {
                (a << shift) & m
            }
        }
    }
}

/// Evaluate all lanes of `inputs` (each the same length).
pub fn eval(kind: OpKind, bits: u32, signed: bool, shift: u32, inputs: &[&[u64]]) -> Vec<u64> {
    let lanes = inputs.first().map_or(0, |v| v.len());
    let mut operands = vec![0u64; inputs.len()];
    (0..lanes)
        .map(|lane| {
            for (slot, v) in operands.iter_mut().zip(inputs) {
                *slot = v[lane];
            }
            eval_lane(kind, bits, signed, shift, &operands)
        })
        .collect()
}
