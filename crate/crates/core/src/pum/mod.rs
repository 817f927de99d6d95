//! Bulk bitwise computation inside DRAM subarrays.

pub mod alloc;
pub mod circuit;
pub mod cost;
pub mod error;
pub mod layout;
pub mod program;
pub mod subarray;
pub mod synth;

pub use alloc::{allocate, allocate_rows, Allocation, OperandBinding};
pub use circuit::{equivalent, BoolCircuit, BoolGate, MajCircuit, MajGate, NodeId};
pub use cost::{program_cost, ProgramCost, TimingModel};
pub use error::PumError;
pub use layout::{transpose_to_horizontal, transpose_to_vertical, BitMatrix};
pub use program::{execute_program, Command, CommandCounts, MicroProgram};
pub use subarray::{ActivationLog, RowLayout, RowRole, SubarrayConfig, SubarrayState};
pub use synth::synthesize_maj;
