//! Neural-network layer descriptors and family classification.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LayerError {
    #[error("layer `{0}` has no parameter footprint")]
    ZeroFootprint(String),
    #[error("unknown layer kind `{0}`")]
    UnknownKind(String),
    #[error("layer csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LayerKind {
    Conv,
    Fc,
    LstmGate,
    Recurrent,
    Other,
}

impl LayerKind {
    pub fn name(self) -> &'static str {
        match self {
            LayerKind::Conv => "conv",
            LayerKind::Fc => "fc",
            LayerKind::LstmGate => "lstmgate",
            LayerKind::Recurrent => "recurrent",
            LayerKind::Other => "other",
        }
    }
}

impl fmt::Display for LayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LayerKind {
    type Err = LayerError;

    fn from_str(s: &str) -> Result<Self, LayerError> {
        match s.trim().to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "conv" => Ok(LayerKind::Conv),
            "fc" | "dense" => Ok(LayerKind::Fc),
            "lstmgate" | "lstm" => Ok(LayerKind::LstmGate),
            "recurrent" | "rnn" => Ok(LayerKind::Recurrent),
            "other" => Ok(LayerKind::Other),
            _ => Err(LayerError::UnknownKind(s.to_string())),
        }
    }
}

impl TryFrom<String> for LayerKind {
    type Error = LayerError;
    fn try_from(s: String) -> Result<Self, LayerError> {
        s.parse()
    }
}

impl From<LayerKind> for String {
    fn from(k: LayerKind) -> String {
        k.name().to_string()
    }
}

/// Byte and operation counts are floating point so that malformed input
/// (negative, NaN) can be represented and classified as such.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerDescriptor {
    pub name: String,
    pub kind: LayerKind,
    pub mac_count: f64,
    #[serde(rename = "param_footprint_bytes")]
    pub param_footprint: f64,
    /// flop per parameter byte
    pub param_reuse: f64,
    #[serde(rename = "activation_footprint_bytes")]
    pub activation_footprint: f64,
}

impl LayerDescriptor {
    pub fn new(
        name: impl Into<String>,
        kind: LayerKind,
        mac_count: f64,
        param_footprint: f64,
        param_reuse: f64,
        activation_footprint: f64,
    ) -> Self {
        Self {
            name: name.into(),
            kind,
            mac_count,
            param_footprint,
            param_reuse,
            activation_footprint,
        }
    }

    /// Descriptor whose parameter reuse is `flops / param_footprint`.
    pub fn derived(
        name: impl Into<String>,
        kind: LayerKind,
        mac_count: f64,
        param_footprint: f64,
        activation_footprint: f64,
    ) -> Self {
        let reuse = if param_footprint > 0.0 {
            2.0 * mac_count / param_footprint
        } else {
            0.0
        };
        Self::new(name, kind, mac_count, param_footprint, reuse, activation_footprint)
    }

    pub fn flops(&self) -> f64 {
        2.0 * self.mac_count
    }

    pub fn is_valid(&self) -> bool {
        [
            self.mac_count,
            self.param_footprint,
            self.param_reuse,
            self.activation_footprint,
        ]
        .iter()
        .all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// flop per byte of parameters and activations.
pub fn arithmetic_intensity(layer: &LayerDescriptor) -> Result<f64, LayerError> {
    if !(layer.param_footprint > 0.0) {
        return Err(LayerError::ZeroFootprint(layer.name.clone()));
    }
    Ok(layer.flops() / (layer.param_footprint + layer.activation_footprint))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
    Unclassified,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyId::F1 => "F1",
            FamilyId::F2 => "F2",
            FamilyId::F3 => "F3",
            FamilyId::F4 => "F4",
            FamilyId::F5 => "F5",
            FamilyId::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

pub const LARGE_FOOTPRINT_BYTES: f64 = 512.0 * 1024.0;
pub const HIGH_REUSE_FLOP_PER_BYTE: f64 = 81.0;
pub const HIGH_MAC_COUNT: f64 = 1e7;

pub fn classify_family(layer: &LayerDescriptor) -> FamilyId {
    if !layer.is_valid() {
        return FamilyId::Unclassified;
    }
    if layer.param_footprint >= LARGE_FOOTPRINT_BYTES {
        if layer.kind == LayerKind::LstmGate {
            FamilyId::F3
        } else {
            FamilyId::F4
        }
    } else if layer.param_reuse >= HIGH_REUSE_FLOP_PER_BYTE {
        if layer.mac_count >= HIGH_MAC_COUNT {
            FamilyId::F1
        } else {
            FamilyId::F2
        }
    } else {
        FamilyId::F5
    }
}

/// Read descriptors from CSV with header
/// `name,kind,mac_count,param_footprint_bytes,param_reuse,activation_footprint_bytes`.
pub fn read_layers_csv<R: Read>(reader: R) -> Result<Vec<LayerDescriptor>, LayerError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(LayerError::from)).collect()
}

pub fn write_layers_csv<W: Write>(writer: W, layers: &[LayerDescriptor]) -> Result<(), LayerError> {
    let mut w = csv::Writer::from_writer(writer);
    for layer in layers {
        w.serialize(layer)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
