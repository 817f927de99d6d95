//! Bit-serial integer operations compiled to in-DRAM command sequences.

mod circuits;
pub mod error;
pub mod exec;
pub mod kind;
pub mod lanes;
pub mod program;
pub mod reference;
pub mod verify;

pub use circuits::RowPlan;
pub use error::OpError;
pub use exec::{
    exec, exec_arith, exec_misc, exec_reduction, exec_relational, shift_left, throughput_report,
};
pub use kind::{ArithOp, MiscOp, OpKind, ReduceOp, RelOp};
pub use lanes::LaneVector;
pub use program::{OpProgram, OpShape};
