use crate::layer::{classify_family, FamilyId};

use super::{AcceleratorConfig, MensaError, ModelGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Accelerator {
    Pascal,
    Pavlov,
    Jacquard,
}

impl Accelerator {
    pub const ALL: [Accelerator; 3] = [Accelerator::Pascal, Accelerator::Pavlov, Accelerator::Jacquard];

    pub fn for_family(family: FamilyId) -> Self {
        match family {
            FamilyId::F1 | FamilyId::F2 | FamilyId::Unclassified => Accelerator::Pascal,
            FamilyId::F3 => Accelerator::Pavlov,
            FamilyId::F4 | FamilyId::F5 => Accelerator::Jacquard,
        }
    }

    pub fn config(self) -> AcceleratorConfig {
        match self {
            Accelerator::Pascal => AcceleratorConfig::pascal(),
            Accelerator::Pavlov => AcceleratorConfig::pavlov(),
            Accelerator::Jacquard => AcceleratorConfig::jacquard(),
        }
    }
}

/// Activations moved from one accelerator to another through DRAM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub from_layer: usize,
    pub to_layer: usize,
    pub source: Accelerator,
    pub destination: Accelerator,
    pub bytes: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleAssignment {
    pub families: Vec<FamilyId>,
    /// indexed like the model's layers
    pub accelerators: Vec<Accelerator>,
    /// execution order
    pub order: Vec<usize>,
    pub transfers: Vec<Transfer>,
    pub warnings: Vec<String>,
}

/// Maps each layer to the accelerator built for its family. The bytes moved
/// across an accelerator boundary are the producer's activation footprint.
pub fn schedule_layers(model: &ModelGraph) -> Result<ScheduleAssignment, MensaError> {
    let order = model.topological_order()?;
    let families: Vec<FamilyId> = model.layers.iter().map(classify_family).collect();
    let accelerators: Vec<Accelerator> = families.iter().map(|&f| Accelerator::for_family(f)).collect();
    let warnings = model
        .layers
        .iter()
        .zip(&families)
        .filter(|(_, &f)| f == FamilyId::Unclassified)
        .map(|(l, _)| format!("layer `{}` could not be classified; placed on pascal", l.name))
        .collect();
    let transfers = model
        .edges
        .iter()
        .filter(|&&(a, b)| accelerators[a] != accelerators[b])
        .map(|&(a, b)| Transfer {
            from_layer: a,
            to_layer: b,
            source: accelerators[a],
            destination: accelerators[b],
            bytes: model.layers[a].activation_footprint.max(0.0),
        })
        .collect();
    Ok(ScheduleAssignment {
        families,
        accelerators,
        order,
        transfers,
        warnings,
    })
}
