//! Models and simulators for processing-in-memory systems.

pub mod pum;
pub mod simdram;
pub mod bnn;
pub mod layer;
pub mod roofline;
pub mod mensa;
pub mod upmem;
