use thiserror::Error;

use crate::pum::PumError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("operand widths differ: expected {expected} bits, found {found}")]
    WidthMismatch { expected: u32, found: u32 },
    #[error("operands mix signed and unsigned interpretations")]
    SignednessMismatch,
    #[error("lane counts differ: expected {expected}, found {found}")]
    LaneCountMismatch { expected: usize, found: usize },
    #[error("{op} takes {expected} operands, got {found}")]
    ArityError {
        op: &'static str,
        expected: String,
        found: usize,
    },
    #[error("divisor is zero in lane {lane}")]
    DivisionByZeroLane { lane: usize },
    #[error("predicate lane {lane} holds {value}, expected 0 or 1")]
    PredicateNotBoolean { lane: usize, value: u64 },
    #[error("shift by {shift} is out of range for {bits}-bit elements")]
    ShiftOutOfRange { shift: u32, bits: u32 },
    #[error("lane {lane} value {value} does not fit in {bits} bits")]
    ValueOutOfRange { lane: usize, value: u64, bits: u32 },
    #[error("{needed} data rows are needed but the subarray has {available}")]
    OperandsDoNotFit { needed: usize, available: usize },
    #[error("unknown operation `{0}`")]
    UnknownOp(String),
    #[error(transparent)]
    Pum(#[from] PumError),
}

pub type Result<T, E = OpError> = std::result::Result<T, E>;
