use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::layer::{classify_family, FamilyId, LayerDescriptor};
use crate::roofline::{energy_breakdown, EnergyBreakdown, RooflineError, Traffic};

use super::{schedule_layers, Accelerator, AcceleratorConfig, MensaError, ModelGraph, Transfer};

#[derive(Debug, Clone, PartialEq)]
pub struct LayerReport {
    pub name: String,
    pub accelerator: String,
    pub family: FamilyId,
    pub compute_time: f64,
    pub memory_time: f64,
    pub latency: f64,
    pub utilization: f64,
    pub traffic: Traffic,
    pub energy: EnergyBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub transfer: Transfer,
    pub time: f64,
    pub energy: EnergyBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub latency: f64,
    pub energy: EnergyBreakdown,
    pub utilization: f64,
    /// inferences per second, 0 for an empty run
    pub throughput: f64,
    pub layers: Vec<LayerReport>,
    pub transfers: Vec<TransferReport>,
}

impl CostReport {
    fn aggregate(layers: Vec<LayerReport>, transfers: Vec<TransferReport>, utilization: f64) -> Self {
        let latency = layers.iter().map(|l| l.latency).sum::<f64>()
            + transfers.iter().map(|t| t.time).sum::<f64>();
        let energy = layers.iter().map(|l| l.energy).sum::<EnergyBreakdown>()
            + transfers.iter().map(|t| t.energy).sum::<EnergyBreakdown>();
        Self {
            latency,
            energy,
            utilization,
            throughput: if latency > 0.0 { 1.0 / latency } else { 0.0 },
            layers,
            transfers,
        }
    }
}

fn busy_fraction<'a>(layers: impl Iterator<Item = &'a LayerReport>) -> f64 {
    let (compute, latency) = layers.fold((0.0, 0.0), |(c, t), l| (c + l.compute_time, t + l.latency));
    if latency > 0.0 {
        compute / latency
    } else {
        0.0
    }
}

fn check_accelerator(accel: &AcceleratorConfig) -> Result<(), MensaError> {
    let positive = |v: f64| v.is_finite() && v > 0.0;
    if !positive(accel.peak_throughput) || !positive(accel.memory_bandwidth) {
        return Err(MensaError::ZeroThroughput(accel.name.clone()));
    }
    let non_negative = |v: f64| v.is_finite() && v >= 0.0;
    if !(non_negative(accel.act_buffer)
        && non_negative(accel.param_buffer)
        && non_negative(accel.per_pe_registers)
        && positive(accel.element_bytes)
        && accel.pe_count() > 0)
    {
        return Err(MensaError::InvalidAccelerator(accel.name.clone()));
    }
    Ok(())
}

fn layer_report(layer: &LayerDescriptor, accel: &AcceleratorConfig) -> Result<LayerReport, MensaError> {
    check_accelerator(accel)?;
    if !layer.is_valid() {
        return Err(MensaError::InvalidLayer(layer.name.clone()));
    }
    let flops = layer.flops();
    let compute_time = flops / accel.peak_throughput;
    let unbuffered_params = (layer.param_footprint - accel.param_buffer).max(0.0);
    // spilled activations are written out and read back
    let act_spill = 2.0 * (layer.activation_footprint - accel.act_buffer).max(0.0);
    let offchip_bytes = unbuffered_params + act_spill;
    let memory_time = offchip_bytes / accel.memory_bandwidth;
    let latency = compute_time.max(memory_time);
    let utilization = if latency > 0.0 { compute_time / latency } else { 0.0 };

    let operand_bytes = layer.mac_count * accel.element_bytes;
    let param_fetch = layer.param_footprint.max(operand_bytes / accel.param_reuse_factor());
    let act_fetch = layer.activation_footprint.max(operand_bytes / accel.act_reuse_factor());
    let traffic = Traffic {
        flops,
        act_buffer_bytes: act_fetch,
        param_buffer_bytes: if accel.param_buffer > 0.0 { param_fetch } else { 0.0 },
        offchip_bytes,
        noc_bytes: param_fetch + act_fetch,
        runtime: latency,
    };
    let energy = match energy_breakdown(&traffic, &accel.machine()) {
        Ok(e) => e,
        Err(RooflineError::AllZeroTraffic) => EnergyBreakdown::default(),
        Err(e) => return Err(MensaError::Energy(e)),
    };
    Ok(LayerReport {
        name: layer.name.clone(),
        accelerator: accel.name.clone(),
        family: classify_family(layer),
        compute_time,
        memory_time,
        latency,
        utilization,
        traffic,
        energy,
    })
}

/// Analytical cost of one layer with compute and memory fully overlapped.
pub fn estimate_layer(layer: &LayerDescriptor, accel: &AcceleratorConfig) -> Result<CostReport, MensaError> {
    let report = layer_report(layer, accel)?;
    let utilization = report.utilization;
    Ok(CostReport::aggregate(vec![report], Vec::new(), utilization))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Baseline,
    BaseHb,
    MensaG,
}

impl System {
    pub const ALL: [System; 3] = [System::Baseline, System::BaseHb, System::MensaG];

    pub fn name(self) -> &'static str {
        match self {
            System::Baseline => "baseline",
            System::BaseHb => "base+hb",
            System::MensaG => "mensa-g",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = MensaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" => Ok(System::Baseline),
            "base+hb" | "basehb" | "base-hb" => Ok(System::BaseHb),
            "mensa-g" | "mensag" | "mensa" => Ok(System::MensaG),
            _ => Err(MensaError::UnknownSystem(s.to_string())),
        }
    }
}

fn transfer_report(t: Transfer) -> TransferReport {
    let (src, dst) = (t.source.config(), t.destination.config());
    let bandwidth = src.memory_bandwidth.min(dst.memory_bandwidth);
    let offchip = t.bytes * (src.machine().e_byte + dst.machine().e_byte);
    TransferReport {
        transfer: t,
        time: 2.0 * t.bytes / bandwidth,
        energy: EnergyBreakdown {
            offchip,
            ..EnergyBreakdown::default()
        },
    }
}

/// Runs every layer in dependency order. Mensa-G utilization is the mean
/// over the accelerators that receive at least one layer.
pub fn run_model(model: &ModelGraph, system: System) -> Result<CostReport, MensaError> {
    match system {
        System::Baseline | System::BaseHb => {
            let order = model.topological_order()?;
            let accel = if system == System::Baseline {
                AcceleratorConfig::baseline()
            } else {
                AcceleratorConfig::base_hb()
            };
            let layers = order
                .par_iter()
                .map(|&i| layer_report(&model.layers[i], &accel))
                .collect::<Result<Vec<_>, _>>()?;
            let utilization = busy_fraction(layers.iter());
            Ok(CostReport::aggregate(layers, Vec::new(), utilization))
        }
        System::MensaG => {
            let schedule = schedule_layers(model)?;
            let layers = schedule
                .order
                .par_iter()
                .map(|&i| layer_report(&model.layers[i], &schedule.accelerators[i].config()))
                .collect::<Result<Vec<_>, _>>()?;
            let mut per_accel: BTreeMap<&str, Vec<&LayerReport>> = BTreeMap::new();
            for l in &layers {
                per_accel.entry(l.accelerator.as_str()).or_default().push(l);
            }
            let utilization = if per_accel.is_empty() {
                0.0
            } else {
                per_accel.values().map(|ls| busy_fraction(ls.iter().copied())).sum::<f64>()
                    / per_accel.len() as f64
            };
            let transfers = schedule.transfers.into_iter().map(transfer_report).collect();
            Ok(CostReport::aggregate(layers, transfers, utilization))
        }
    }
}

/// Accelerator each layer runs on under `system`, indexed like the model.
pub fn placement(model: &ModelGraph, system: System) -> Result<Vec<String>, MensaError> {
    Ok(match system {
        System::Baseline => vec![AcceleratorConfig::baseline().name; model.layers.len()],
        System::BaseHb => vec![AcceleratorConfig::base_hb().name; model.layers.len()],
        System::MensaG => schedule_layers(model)?
            .accelerators
            .into_iter()
            .map(|a: Accelerator| a.config().name)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layer::LayerKind;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1e-12)
    }

    #[test]
    fn compute_bound_layer_on_pascal() {
        let l = LayerDescriptor::derived("c", LayerKind::Conv, 1e9, 64e3, 32e3);
        let r = estimate_layer(&l, &AcceleratorConfig::pascal()).unwrap();
        assert!(close(r.latency, 1e-3));
        assert_eq!(r.utilization, 1.0);
        assert_eq!(r.layers[0].traffic.offchip_bytes, 0.0);
    }

    #[test]
    fn streamed_parameters_on_pavlov() {
        let l = LayerDescriptor::derived("g", LayerKind::LstmGate, 2e6, 4e6, 8e3);
        let r = estimate_layer(&l, &AcceleratorConfig::pavlov()).unwrap();
        assert!(close(r.layers[0].memory_time, 15.625e-6));
    }

    #[test]
    fn zero_flop_layer() {
        let l = LayerDescriptor::derived("z", LayerKind::Other, 0.0, 1e6, 0.0);
        let r = estimate_layer(&l, &AcceleratorConfig::pascal()).unwrap();
        assert_eq!(r.latency, r.layers[0].memory_time);
        assert_eq!(r.utilization, 0.0);
        let empty = LayerDescriptor::derived("e", LayerKind::Other, 0.0, 0.0, 0.0);
        let r = estimate_layer(&empty, &AcceleratorConfig::pascal()).unwrap();
        assert_eq!((r.latency, r.utilization, r.energy.total()), (0.0, 0.0, 0.0));
    }

    #[test]
    fn zero_throughput_rejected() {
        let mut a = AcceleratorConfig::pascal();
        a.peak_throughput = 0.0;
        let l = LayerDescriptor::derived("c", LayerKind::Conv, 1e6, 1e3, 1e3);
        assert!(matches!(estimate_layer(&l, &a), Err(MensaError::ZeroThroughput(_))));
    }

    #[test]
    fn transfer_cost_through_dram() {
        let t = Transfer {
            from_layer: 0,
            to_layer: 1,
            source: Accelerator::Pascal,
            destination: Accelerator::Pavlov,
            bytes: 32e3,
        };
        let r = transfer_report(t);
        assert!(close(r.time, 2.0 * 32e3 / 32e9));
        assert!(close(r.energy.offchip, 32e3 * (64e-12 + 20e-12)));
    }

    #[test]
    fn system_names_round_trip() {
        for s in System::ALL {
            assert_eq!(s.name().parse::<System>().unwrap(), s);
        }
        assert!("tpu".parse::<System>().is_err());
    }
}
