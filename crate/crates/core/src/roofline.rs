//! Throughput and energy-efficiency rooflines and energy accounting.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RooflineError {
    #[error("intensity must be positive")]
    ZeroIntensity,
    #[error("roof must be positive")]
    ZeroRoof,
    #[error("traffic is all zero")]
    AllZeroTraffic,
    #[error("traffic quantity `{0}` is negative or not finite")]
    InvalidTraffic(&'static str),
    #[error("machine parameter `{0}` is out of range")]
    InvalidMachine(&'static str),
}

pub type Result<T, E = RooflineError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineModel {
    /// flop/s
    pub peak_throughput: f64,
    /// byte/s to off-chip memory
    pub mem_bandwidth: f64,
    /// J/flop
    pub e_flop: f64,
    /// J/byte off-chip
    pub e_byte: f64,
    /// J/byte in on-chip buffers
    pub e_buffer_byte: f64,
    /// J/byte moved over the on-chip network
    pub e_noc_byte: f64,
    /// W
    pub static_power: f64,
}

impl MachineModel {
    /// Edge-TPU-like defaults: 2 TFLOP/s, 32 GB/s. Energy coefficients are
    /// calibrated so a streaming LSTM profile spends about three quarters
    /// of its energy off chip.
    pub fn edge_tpu() -> Self {
        Self {
            peak_throughput: 2e12,
            mem_bandwidth: 32e9,
            e_flop: 0.3e-12,
            e_byte: 64e-12,
            e_buffer_byte: 11.8e-12,
            e_noc_byte: 1.28e-12,
            static_power: 0.19,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("peak_throughput", self.peak_throughput),
            ("mem_bandwidth", self.mem_bandwidth),
            ("e_flop", self.e_flop),
            ("e_byte", self.e_byte),
            ("e_buffer_byte", self.e_buffer_byte),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(RooflineError::InvalidMachine(name));
            }
        }
        for (name, v) in [("e_noc_byte", self.e_noc_byte), ("static_power", self.static_power)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(RooflineError::InvalidMachine(name));
            }
        }
        Ok(())
    }

    /// Intensity where the memory and compute roofs meet.
    pub fn ridge_point(&self) -> f64 {
        self.peak_throughput / self.mem_bandwidth
    }
}

impl Default for MachineModel {
    fn default() -> Self {
        Self::edge_tpu()
    }
}

pub fn attainable_throughput(intensity: f64, m: &MachineModel) -> f64 {
    m.peak_throughput.min(intensity.max(0.0) * m.mem_bandwidth)
}

/// flop/J bound at `intensity` flop per off-chip byte.
pub fn attainable_energy_efficiency(intensity: f64, m: &MachineModel) -> Result<f64> {
    if !(intensity > 0.0) {
        return Err(RooflineError::ZeroIntensity);
    }
    Ok(1.0 / (m.e_flop + m.e_byte / intensity))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Utilization {
    pub fraction: f64,
    /// Set when the measurement exceeds the roof.
    pub above_roof: bool,
}

pub fn utilization(measured: f64, roof: f64) -> Result<Utilization> {
    if !(roof > 0.0) {
        return Err(RooflineError::ZeroRoof);
    }
    let fraction = measured / roof;
    Ok(Utilization {
        fraction,
        above_roof: fraction > 1.0,
    })
}

/// Work and data movement of one run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Traffic {
    pub flops: f64,
    pub act_buffer_bytes: f64,
    pub param_buffer_bytes: f64,
    pub offchip_bytes: f64,
    pub noc_bytes: f64,
    /// seconds, charged at static power
    pub runtime: f64,
}

impl Traffic {
    fn fields(&self) -> [(&'static str, f64); 6] {
        [
            ("flops", self.flops),
            ("act_buffer_bytes", self.act_buffer_bytes),
            ("param_buffer_bytes", self.param_buffer_bytes),
            ("offchip_bytes", self.offchip_bytes),
            ("noc_bytes", self.noc_bytes),
            ("runtime", self.runtime),
        ]
    }
}

impl std::ops::Add for Traffic {
    type Output = Traffic;
    fn add(self, o: Traffic) -> Traffic {
        Traffic {
            flops: self.flops + o.flops,
            act_buffer_bytes: self.act_buffer_bytes + o.act_buffer_bytes,
            param_buffer_bytes: self.param_buffer_bytes + o.param_buffer_bytes,
            offchip_bytes: self.offchip_bytes + o.offchip_bytes,
            noc_bytes: self.noc_bytes + o.noc_bytes,
            runtime: self.runtime + o.runtime,
        }
    }
}

/// Joules per component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    pub pe: f64,
    pub act_buffer: f64,
    pub param_buffer: f64,
    pub offchip: f64,
    pub noc: f64,
    pub static_energy: f64,
}

impl EnergyBreakdown {
    pub const COMPONENTS: [&'static str; 6] =
        ["pe", "act_buffer", "param_buffer", "offchip", "noc", "static"];

    pub fn joules(&self) -> [f64; 6] {
        [
            self.pe,
            self.act_buffer,
            self.param_buffer,
            self.offchip,
            self.noc,
            self.static_energy,
        ]
    }

    pub fn total(&self) -> f64 {
        self.joules().iter().sum()
    }

    /// Share of each component; all zero when the total is zero.
    pub fn fractions(&self) -> [f64; 6] {
        let total = self.total();
        if total > 0.0 {
            self.joules().map(|j| j / total)
        } else {
            [0.0; 6]
        }
    }
}

impl std::ops::Add for EnergyBreakdown {
    type Output = EnergyBreakdown;
    fn add(self, o: EnergyBreakdown) -> EnergyBreakdown {
        EnergyBreakdown {
            pe: self.pe + o.pe,
            act_buffer: self.act_buffer + o.act_buffer,
            param_buffer: self.param_buffer + o.param_buffer,
            offchip: self.offchip + o.offchip,
            noc: self.noc + o.noc,
            static_energy: self.static_energy + o.static_energy,
        }
    }
}

impl std::iter::Sum for EnergyBreakdown {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

pub fn energy_breakdown(traffic: &Traffic, m: &MachineModel) -> Result<EnergyBreakdown> {
    for (name, v) in traffic.fields() {
        if !(v.is_finite() && v >= 0.0) {
            return Err(RooflineError::InvalidTraffic(name));
        }
    }
    if traffic.fields().iter().all(|&(_, v)| v == 0.0) {
        return Err(RooflineError::AllZeroTraffic);
    }
    Ok(EnergyBreakdown {
        pe: m.e_flop * traffic.flops,
        act_buffer: m.e_buffer_byte * traffic.act_buffer_bytes,
        param_buffer: m.e_buffer_byte * traffic.param_buffer_bytes,
        offchip: m.e_byte * traffic.offchip_bytes,
        noc: m.e_noc_byte * traffic.noc_bytes,
        static_energy: m.static_power * traffic.runtime,
    })
}

/// Streaming recurrent-layer profile: every parameter byte comes from DRAM
/// once, feeds two flops, passes through the parameter buffer and the
/// on-chip network; activations are small.
pub fn lstm_like_traffic(offchip_bytes: f64, m: &MachineModel) -> Traffic {
    Traffic {
        flops: 2.0 * offchip_bytes,
        act_buffer_bytes: offchip_bytes / 16.0,
        param_buffer_bytes: offchip_bytes,
        offchip_bytes,
        noc_bytes: offchip_bytes,
        runtime: offchip_bytes / m.mem_bandwidth,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub intensity: f64,
    pub attainable: f64,
    /// flop/J
    pub energy_efficiency: f64,
}

/// `points` log-spaced intensities from `lo` to `hi` inclusive.
pub fn sweep(m: &MachineModel, lo: f64, hi: f64, points: usize) -> Result<Vec<SweepPoint>> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(RooflineError::ZeroIntensity);
    }
    let step = if points > 1 {
        (hi / lo).ln() / (points - 1) as f64
    } else {
        0.0
    };
    (0..points)
        .map(|i| {
            let intensity = if i + 1 == points { hi } else { lo * (step * i as f64).exp() };
            Ok(SweepPoint {
                intensity,
                attainable: attainable_throughput(intensity, m),
                energy_efficiency: attainable_energy_efficiency(intensity, m)?,
            })
        })
        .collect()
}
