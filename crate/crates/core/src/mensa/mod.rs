//! Heterogeneous edge-accelerator model: a catalog of accelerator
//! configurations, a family-driven layer scheduler and an analytical
//! latency, energy and utilization estimator.

mod accel;
mod estimate;
mod graph;
mod schedule;
mod suite;

use thiserror::Error;

use crate::roofline::RooflineError;

pub use accel::{AcceleratorConfig, Dataflow, Placement};
pub use estimate::{estimate_layer, placement, run_model, CostReport, LayerReport, System, TransferReport};
pub use graph::ModelGraph;
pub use schedule::{schedule_layers, Accelerator, ScheduleAssignment, Transfer};
pub use suite::{cnn_heavy, lstm_heavy, mixed, synthetic_suite};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MensaError {
    #[error("model graph contains a cycle")]
    CyclicModel,
    #[error("accelerator `{0}` has zero peak throughput or bandwidth")]
    ZeroThroughput(String),
    #[error("accelerator `{0}` has an invalid configuration")]
    InvalidAccelerator(String),
    #[error("layer `{0}` has a negative or non-finite quantity")]
    InvalidLayer(String),
    #[error("edge {from}->{to} refers past the {layers} layers")]
    EdgeOutOfRange { from: usize, to: usize, layers: usize },
    #[error("unknown system `{0}` (expected baseline, base+hb or mensa-g)")]
    UnknownSystem(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Energy(#[from] RooflineError),
}
