//! Latency and throughput of a command sequence.
//!
//! Every bank runs the same program over its own lanes, so latency is the
//! single-bank command time and throughput scales with the bank count.

use super::error::{PumError, Result};
use super::program::{CommandCounts, MicroProgram};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingModel {
    /// Seconds per row copy (also charged for constant initialisation).
    pub t_copy: f64,
    pub t_tra: f64,
    pub t_not: f64,
    pub lanes_per_bank: u64,
    pub banks: u32,
}

pub const MAX_BANKS: u32 = 16;

// Effective per-command times, scaled so that the 32-bit adder built by
// this crate reaches 20.1 Gops/s on one bank. Copies and NOTs take two row
// activations, a triple activation one.
impl Default for TimingModel {
    fn default() -> Self {
        Self {
            t_copy: 10.534e-9,
            t_tra: 5.267e-9,
            t_not: 10.534e-9,
            lanes_per_bank: 65_536,
            banks: 1,
        }
    }
}

impl TimingModel {
    pub fn with_banks(mut self, banks: u32) -> Result<Self> {
        self.banks = banks;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_BANKS).contains(&self.banks) {
            return Err(PumError::InvalidConfig(format!(
                "banks must be in 1..={MAX_BANKS}, got {}",
                self.banks
            )));
        }
        if self.lanes_per_bank == 0 {
            return Err(PumError::InvalidConfig("lanes_per_bank must be positive".into()));
        }
        for (name, t) in [("t_copy", self.t_copy), ("t_tra", self.t_tra), ("t_not", self.t_not)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(PumError::InvalidConfig(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(())
    }

    pub fn latency(&self, counts: &CommandCounts) -> f64 {
        (counts.copies + counts.constant_inits) as f64 * self.t_copy
            + counts.triple_activations as f64 * self.t_tra
            + counts.not_activations as f64 * self.t_not
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProgramCost {
    pub counts: CommandCounts,
    /// Seconds for one pass over all lanes.
    pub latency: f64,
    /// Element operations per second across all banks.
    pub throughput: f64,
}

pub fn counts_cost(counts: CommandCounts, timing: &TimingModel) -> Result<ProgramCost> {
    timing.validate()?;
    let latency = timing.latency(&counts);
    let lanes = timing.lanes_per_bank as f64 * timing.banks as f64;
    let throughput = if latency > 0.0 { lanes / latency } else { f64::INFINITY };
    Ok(ProgramCost {
        counts,
        latency,
        throughput,
    })
}

pub fn program_cost(program: &MicroProgram, timing: &TimingModel) -> Result<ProgramCost> {
    counts_cost(program.counts(), timing)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throughput_scales_with_banks() {
        let p: MicroProgram = "INITC 13 0\nCOPY 0 9\nTRA 9 10 11\nNOT 9 12\n".parse().unwrap();
        let t = TimingModel::default();
        let one = program_cost(&p, &t).unwrap();
        let expected = 2.0 * t.t_copy + t.t_tra + t.t_not;
        assert!((one.latency - expected).abs() < 1e-18);
        let four = program_cost(&p, &t.with_banks(4).unwrap()).unwrap();
        assert_eq!(four.latency, one.latency);
        assert!((four.throughput / one.throughput - 4.0).abs() < 1e-12);
        assert!(t.with_banks(0).is_err());
        assert!(t.with_banks(17).is_err());
    }

    #[test]
    fn latency_is_a_weighted_sum() {
        let p = MicroProgram::from_commands(vec![super::super::program::Command::CopyRow { src: 0, dst: 9 }; 10]);
        let t = TimingModel {
            t_copy: 100e-9,
            lanes_per_bank: 8192,
            ..TimingModel::default()
        };
        let c = program_cost(&p, &t).unwrap();
        assert!((c.latency - 1e-6).abs() < 1e-15);
        assert!((c.throughput - 8.192e9).abs() < 1.0);
    }
}
