use std::fmt;

use crate::roofline::MachineModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    OnChip,
    InMemoryLogicLayer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dataflow {
    /// Outputs accumulate in PE registers; each parameter is broadcast to
    /// every PE.
    TemporalReduceSpatialMulticast,
    /// Parameters stay in PE registers; activations are broadcast along a
    /// PE row.
    WeightStationary,
    /// Parameters stay in PE registers; every PE contributes a partial sum
    /// to one output, so each activation reaches all PEs.
    PartialSumGather,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcceleratorConfig {
    pub name: String,
    pub pe_rows: usize,
    pub pe_cols: usize,
    /// flop/s
    pub peak_throughput: f64,
    pub act_buffer: f64,
    /// zero means parameters stream straight from memory
    pub param_buffer: f64,
    pub per_pe_registers: f64,
    pub placement: Placement,
    /// byte/s
    pub memory_bandwidth: f64,
    pub dataflow: Dataflow,
    /// bytes per parameter or activation element
    pub element_bytes: f64,
}

const KIB: f64 = 1024.0;
const MIB: f64 = 1024.0 * 1024.0;

impl AcceleratorConfig {
    /// Monolithic edge accelerator with off-chip memory.
    pub fn baseline() -> Self {
        Self {
            name: "baseline".into(),
            pe_rows: 64,
            pe_cols: 64,
            peak_throughput: 2e12,
            act_buffer: 2.0 * MIB,
            param_buffer: 4.0 * MIB,
            per_pe_registers: 8.0,
            placement: Placement::OnChip,
            memory_bandwidth: 32e9,
            dataflow: Dataflow::WeightStationary,
            element_bytes: 1.0,
        }
    }

    /// The baseline with 8x memory bandwidth.
    pub fn base_hb() -> Self {
        Self {
            name: "base+hb".into(),
            memory_bandwidth: 256e9,
            ..Self::baseline()
        }
    }

    pub fn pascal() -> Self {
        Self {
            name: "pascal".into(),
            pe_rows: 32,
            pe_cols: 32,
            peak_throughput: 2e12,
            act_buffer: 256.0 * KIB,
            param_buffer: 128.0 * KIB,
            per_pe_registers: 32.0,
            placement: Placement::OnChip,
            memory_bandwidth: 32e9,
            dataflow: Dataflow::TemporalReduceSpatialMulticast,
            element_bytes: 1.0,
        }
    }

    pub fn pavlov() -> Self {
        Self {
            name: "pavlov".into(),
            pe_rows: 8,
            pe_cols: 8,
            peak_throughput: 128e9,
            act_buffer: 128.0 * KIB,
            param_buffer: 0.0,
            per_pe_registers: 512.0,
            placement: Placement::InMemoryLogicLayer,
            memory_bandwidth: 256e9,
            dataflow: Dataflow::WeightStationary,
            element_bytes: 1.0,
        }
    }

    pub fn jacquard() -> Self {
        Self {
            name: "jacquard".into(),
            pe_rows: 16,
            pe_cols: 16,
            peak_throughput: 512e9,
            act_buffer: 128.0 * KIB,
            param_buffer: 128.0 * KIB,
            per_pe_registers: 128.0,
            placement: Placement::InMemoryLogicLayer,
            memory_bandwidth: 256e9,
            dataflow: Dataflow::PartialSumGather,
            element_bytes: 1.0,
        }
    }

    pub fn catalog() -> Vec<Self> {
        vec![
            Self::baseline(),
            Self::base_hb(),
            Self::pascal(),
            Self::pavlov(),
            Self::jacquard(),
        ]
    }

    pub fn by_name(name: &str) -> Option<Self> {
        let lower = name.to_ascii_lowercase();
        Self::catalog().into_iter().find(|a| a.name == lower)
    }

    pub fn pe_count(&self) -> usize {
        self.pe_rows * self.pe_cols
    }

    fn register_reuse(&self) -> f64 {
        (self.per_pe_registers / self.element_bytes).max(1.0)
    }

    /// How many MACs share one parameter fetch from the buffer.
    pub fn param_reuse_factor(&self) -> f64 {
        match self.dataflow {
            Dataflow::TemporalReduceSpatialMulticast => self.pe_count() as f64,
            Dataflow::WeightStationary | Dataflow::PartialSumGather => self.register_reuse(),
        }
    }

    /// How many MACs share one activation fetch from the buffer.
    pub fn act_reuse_factor(&self) -> f64 {
        match self.dataflow {
            Dataflow::TemporalReduceSpatialMulticast => self.pe_cols as f64 * self.register_reuse(),
            Dataflow::WeightStationary => self.pe_cols as f64,
            Dataflow::PartialSumGather => self.pe_count() as f64,
        }
    }

    /// Energy coefficients. SRAM access energy grows with the square root
    /// of capacity, network energy with the square root of the PE count,
    /// and DRAM accesses from the logic layer avoid the off-chip interface.
    pub fn machine(&self) -> MachineModel {
        let buffer_kib = ((self.act_buffer + self.param_buffer) / KIB).max(1.0);
        let buffer_mib = (self.act_buffer + self.param_buffer) / MIB;
        MachineModel {
            peak_throughput: self.peak_throughput,
            mem_bandwidth: self.memory_bandwidth,
            e_flop: 0.3e-12,
            e_byte: match self.placement {
                Placement::OnChip => 64e-12,
                Placement::InMemoryLogicLayer => 20e-12,
            },
            e_buffer_byte: 1.2e-12 * (buffer_kib / 64.0).sqrt(),
            e_noc_byte: 0.02e-12 * (self.pe_count() as f64).sqrt(),
            static_power: 25e-6 * self.pe_count() as f64 + 15e-3 * buffer_mib,
        }
    }
}

impl fmt::Display for AcceleratorConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_energy_matches_edge_defaults() {
        let m = AcceleratorConfig::baseline().machine();
        let e = MachineModel::edge_tpu();
        assert!((m.e_buffer_byte - e.e_buffer_byte).abs() / e.e_buffer_byte < 0.01);
        assert!((m.e_noc_byte - e.e_noc_byte).abs() < 1e-18);
        assert!((m.static_power - e.static_power).abs() / e.static_power < 0.02);
    }

    #[test]
    fn catalog_lookup() {
        assert_eq!(AcceleratorConfig::by_name("Pavlov").unwrap().peak_throughput, 128e9);
        assert_eq!(AcceleratorConfig::by_name("base+hb").unwrap().memory_bandwidth, 256e9);
        assert!(AcceleratorConfig::by_name("tpu").is_none());
    }
}
