use rayon::prelude::*;

use super::circuits::{build_program, RowPlan};
use super::error::{OpError, Result};
use super::kind::{MiscOp, OpKind};
use super::lanes::LaneVector;
use crate::pum::layout::{check_width, load_vertical, read_vertical};
use crate::pum::{execute_program, MicroProgram, SubarrayConfig, SubarrayState};

/// Everything that determines an operation's command sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpShape {
    pub kind: OpKind,
    pub bits: u32,
    pub signed: bool,
    pub arity: usize,
    pub shift: u32,
}

impl OpShape {
    pub fn new(kind: OpKind, bits: u32) -> Self {
        Self {
            kind,
            bits,
            signed: false,
            arity: kind.default_arity(),
            shift: if kind == OpKind::ShiftLeft { 1 } else { 0 },
        }
    }

    pub fn signed(mut self, signed: bool) -> Self {
        self.signed = signed;
        self
    }

    pub fn arity(mut self, arity: usize) -> Self {
        self.arity = arity;
        self
    }

    pub fn shift(mut self, shift: u32) -> Self {
        self.shift = shift;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_width(self.bits)?;
        let (lo, hi) = self.kind.arity_range();
        if self.arity < lo || self.arity > hi {
            let expected = if lo == hi {
                lo.to_string()
            } else {
                format!("at least {lo}")
            };
            return Err(OpError::ArityError {
                op: self.kind.name(),
                expected,
                found: self.arity,
            });
        }
        if self.kind == OpKind::ShiftLeft && self.shift >= self.bits {
            return Err(OpError::ShiftOutOfRange {
                shift: self.shift,
                bits: self.bits,
            });
        }
        Ok(())
    }
}

/// A compiled operation, reusable across any number of lane vectors.
#[derive(Debug, Clone)]
pub struct OpProgram {
    shape: OpShape,
    config: SubarrayConfig,
    program: MicroProgram,
    plan: RowPlan,
}

impl OpProgram {
    pub fn build(shape: OpShape, config: SubarrayConfig) -> Result<Self> {
        shape.validate()?;
        config.validate()?;
        let layout = config.layout();
        let n = shape.bits as usize;
        // the row plan is known before building; check it fits first
        let needed = rows_needed(&shape);
        if needed > layout.data_rows {
            return Err(OpError::OperandsDoNotFit {
                needed,
                available: layout.data_rows,
            });
        }
        let (program, plan) = build_program(
            shape.kind,
            n,
            shape.signed,
            shape.arity,
            shape.shift as usize,
            &layout,
        )?;
        debug_assert_eq!(plan.rows_used, needed);
        Ok(Self {
            shape,
            config,
            program,
            plan,
        })
    }

    pub fn shape(&self) -> &OpShape {
        &self.shape
    }

    pub fn config(&self) -> &SubarrayConfig {
        &self.config
    }

    pub fn program(&self) -> &MicroProgram {
        &self.program
    }

    pub fn input_rows(&self) -> &[usize] {
        &self.plan.inputs
    }

    pub fn output_row(&self) -> usize {
        self.plan.output
    }

    /// Execute over all lanes, one subarray per `columns` lanes.
    pub fn run(&self, inputs: &[&LaneVector]) -> Result<LaneVector> {
        self.check_inputs(inputs)?;
        let bits = self.shape.bits;
        let lanes = inputs[0].len();
        let columns = self.config.columns;
        let chunks: Vec<usize> = (0..lanes).step_by(columns.max(1)).collect();
        let parts: Vec<Vec<u64>> = chunks
            .par_iter()
            .map(|&start| -> Result<Vec<u64>> {
                let end = (start + columns).min(lanes);
                let mut state = SubarrayState::new(self.config)?;
                for (input, &row) in inputs.iter().zip(&self.plan.inputs) {
                    load_vertical(&mut state, row, &input.values()[start..end], bits)?;
                }
                execute_program(&self.program, &mut state)?;
                Ok(read_vertical(&state, self.plan.output, end - start, bits)?)
            })
            .collect::<Result<_>>()?;
        let signed = self.shape.signed && self.shape.kind != OpKind::Misc(MiscOp::BitCount);
        Ok(LaneVector::from_raw(bits, signed, parts.concat()))
    }

    fn check_inputs(&self, inputs: &[&LaneVector]) -> Result<()> {
        let shape = &self.shape;
        if inputs.len() != shape.arity {
            return Err(OpError::ArityError {
                op: shape.kind.name(),
                expected: shape.arity.to_string(),
                found: inputs.len(),
            });
        }
        let lanes = inputs[0].len();
        for v in inputs {
            if v.bits() != shape.bits {
                return Err(OpError::WidthMismatch {
                    expected: shape.bits,
                    found: v.bits(),
                });
            }
            if v.len() != lanes {
                return Err(OpError::LaneCountMismatch {
                    expected: lanes,
                    found: v.len(),
                });
            }
        }
        match shape.kind {
            OpKind::Arith(super::kind::ArithOp::Div) => {
                if let Some(lane) = inputs[1].values().iter().position(|&v| v == 0) {
                    return Err(OpError::DivisionByZeroLane { lane });
                }
            }
            OpKind::Misc(MiscOp::IfThenElse) => {
                if let Some((lane, &value)) =
                    inputs[0].values().iter().enumerate().find(|(_, &v)| v > 1)
                {
                    return Err(OpError::PredicateNotBoolean { lane, value });
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn rows_needed(shape: &OpShape) -> usize {
    use super::kind::ArithOp;
    let n = shape.bits as usize;
    let slots = match shape.kind {
        OpKind::Arith(ArithOp::Div) => return 6 * n + 2,
        OpKind::ShiftLeft => 2,
        OpKind::Reduce(_) | OpKind::Rel(super::kind::RelOp::Max | super::kind::RelOp::Min) => {
            shape.arity + 1
        }
        k => k.default_arity() + 1,
    };
    slots * n
}
