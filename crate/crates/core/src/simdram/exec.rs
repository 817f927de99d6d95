use super::error::{OpError, Result};
use super::kind::{ArithOp, MiscOp, OpKind, ReduceOp, RelOp};
use super::lanes::LaneVector;
use super::program::{OpProgram, OpShape};
use crate::pum::{cost::counts_cost, ProgramCost, SubarrayConfig, TimingModel};

/// Compile and run `kind` on `inputs` with the default subarray geometry.
pub fn exec(kind: OpKind, inputs: &[&LaneVector], shift: u32) -> Result<LaneVector> {
    let first = inputs.first().ok_or(OpError::ArityError {
        op: kind.name(),
        expected: format!("{}", kind.arity_range().0),
        found: 0,
    })?;
    if inputs.iter().any(|v| v.is_signed() != first.is_signed()) {
        return Err(OpError::SignednessMismatch);
    }
    let shape = OpShape::new(kind, first.bits())
        .signed(first.is_signed())
        .arity(inputs.len())
        .shift(shift);
    OpProgram::build(shape, SubarrayConfig::default())?.run(inputs)
}

pub fn exec_arith(op: ArithOp, a: &LaneVector, b: Option<&LaneVector>) -> Result<LaneVector> {
    match b {
        Some(b) => exec(OpKind::Arith(op), &[a, b], 0),
        None => exec(OpKind::Arith(op), &[a], 0),
    }
}

pub fn exec_relational(op: RelOp, inputs: &[&LaneVector]) -> Result<LaneVector> {
    exec(OpKind::Rel(op), inputs, 0)
}

pub fn exec_reduction(op: ReduceOp, inputs: &[&LaneVector]) -> Result<LaneVector> {
    exec(OpKind::Reduce(op), inputs, 0)
}

pub fn exec_misc(op: MiscOp, inputs: &[&LaneVector]) -> Result<LaneVector> {
    exec(OpKind::Misc(op), inputs, 0)
}

pub fn shift_left(a: &LaneVector, shift: u32) -> Result<LaneVector> {
    exec(OpKind::ShiftLeft, &[a], shift)
}

/// Cost of one pass of `kind` at `bits` with default operand counts
/// (shift by one).
pub fn throughput_report(kind: OpKind, bits: u32, timing: &TimingModel) -> Result<ProgramCost> {
    let program = OpProgram::build(OpShape::new(kind, bits), SubarrayConfig::default())?;
    Ok(counts_cost(program.program().counts(), timing)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u8v(values: &[u64]) -> LaneVector {
        LaneVector::unsigned(8, values.to_vec()).unwrap()
    }

    #[test]
    fn documented_examples() {
        let add = exec_arith(ArithOp::Add, &u8v(&[1, 255]), Some(&u8v(&[2, 1]))).unwrap();
        assert_eq!(add.values(), &[3, 0]);
        let abs = LaneVector::new(8, true, vec![0x80, 0xFB, 0x05]).unwrap();
        assert_eq!(exec_arith(ArithOp::Abs, &abs, None).unwrap().values(), &[0x80, 5, 5]);
        let gt = exec_relational(RelOp::Gt, &[&u8v(&[5, 2]), &u8v(&[3, 9])]).unwrap();
        assert_eq!(gt.values(), &[1, 0]);
        let max = exec_relational(RelOp::Max, &[&u8v(&[1, 9]), &u8v(&[4, 2]), &u8v(&[3, 3])]).unwrap();
        assert_eq!(max.values(), &[4, 9]);
        let x = exec_reduction(ReduceOp::Xor, &[&u8v(&[1, 2]), &u8v(&[3, 4]), &u8v(&[5, 6])]).unwrap();
        assert_eq!(x.values(), &[7, 0]);
        let one = u8v(&[9, 17]);
        assert_eq!(exec_reduction(ReduceOp::And, &[&one]).unwrap(), one);
        let bc = exec_misc(MiscOp::BitCount, &[&u8v(&[0b1011, 0xFF, 0])]).unwrap();
        assert_eq!(bc.values(), &[3, 8, 0]);
        let relu = LaneVector::from_signed(8, &[-5, 7]).unwrap();
        assert_eq!(exec_misc(MiscOp::Relu, &[&relu]).unwrap().values(), &[0, 7]);
        let ite = exec_misc(MiscOp::IfThenElse, &[&u8v(&[1, 0]), &u8v(&[10, 10]), &u8v(&[20, 20])]).unwrap();
        assert_eq!(ite.values(), &[10, 20]);
        assert_eq!(shift_left(&u8v(&[1, 3]), 1).unwrap().values(), &[2, 6]);
        assert_eq!(shift_left(&u8v(&[1, 3]), 0).unwrap().values(), &[1, 3]);
    }

    #[test]
    fn input_errors() {
        let a = u8v(&[4, 4]);
        assert_eq!(
            exec_arith(ArithOp::Div, &a, Some(&u8v(&[2, 0]))),
            Err(OpError::DivisionByZeroLane { lane: 1 })
        );
        assert!(matches!(
            exec_misc(MiscOp::IfThenElse, &[&u8v(&[2]), &u8v(&[1]), &u8v(&[1])]),
            Err(OpError::PredicateNotBoolean { lane: 0, value: 2 })
        ));
        let wide = LaneVector::unsigned(16, vec![1, 1]).unwrap();
        assert!(matches!(
            exec_arith(ArithOp::Add, &a, Some(&wide)),
            Err(OpError::WidthMismatch { .. })
        ));
        assert!(matches!(
            exec_relational(RelOp::Gt, &[&a]),
            Err(OpError::ArityError { .. })
        ));
        assert!(matches!(shift_left(&a, 8), Err(OpError::ShiftOutOfRange { .. })));
        assert!(matches!(
            exec_arith(ArithOp::Add, &a, Some(&u8v(&[1]))),
            Err(OpError::LaneCountMismatch { .. })
        ));
    }

    #[test]
    fn shift_is_copies_only() {
        let p = OpProgram::build(OpShape::new(OpKind::ShiftLeft, 32).shift(3), SubarrayConfig::default()).unwrap();
        let c = p.program().counts();
        assert_eq!((c.triple_activations, c.not_activations, c.copies), (0, 0, 3));
    }

    #[test]
    fn empty_lanes() {
        let e = u8v(&[]);
        assert!(exec_arith(ArithOp::Add, &e, Some(&e)).unwrap().is_empty());
    }
}
