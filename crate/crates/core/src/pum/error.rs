use thiserror::Error;

use super::subarray::RowRole;

/// Failures raised by the in-DRAM compute substrate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PumError {
    #[error("row {row} is out of bounds (subarray has {rows} rows)")]
    OutOfBounds { row: usize, rows: usize },
    #[error("row {row} appears more than once in a triple-row activation")]
    DuplicateRow { row: usize },
    #[error("row {row} has role {role:?} and cannot take part in this activation")]
    NonComputeRow { row: usize, role: RowRole },
    #[error("source and destination are the same row ({row})")]
    SameRow { row: usize },
    #[error("circuit contains a cycle through node {node}")]
    Cyclic { node: usize },
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("node {node} references missing operand {operand}")]
    DanglingOperand { node: usize, operand: usize },
    #[error(
        "gate {gate} needs {needed} compute rows but only {available} are available"
    )]
    InsufficientRows {
        gate: usize,
        needed: usize,
        available: usize,
    },
    #[error("operand binding mismatch: {0}")]
    Binding(String),
    #[error("output row {row} overwrites an input that is still read afterwards")]
    OperandAliasing { row: usize },
    #[error("unsupported element width {0} (expected 8, 16, 32 or 64)")]
    UnsupportedWidth(u32),
    #[error("{lanes} lanes do not fit in {columns} columns")]
    TooManyLanes { lanes: usize, columns: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = PumError> = std::result::Result<T, E>;
