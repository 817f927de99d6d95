use std::collections::HashMap;

use crate::layer::LayerDescriptor;

use super::MensaError;

/// Layers plus directed producer -> consumer edges (indices into `layers`).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGraph {
    pub name: String,
    pub layers: Vec<LayerDescriptor>,
    pub edges: Vec<(usize, usize)>,
}

impl ModelGraph {
    pub fn new(
        name: impl Into<String>,
        layers: Vec<LayerDescriptor>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, MensaError> {
        for &(from, to) in &edges {
            if from >= layers.len() || to >= layers.len() {
                return Err(MensaError::EdgeOutOfRange {
                    from,
                    to,
                    layers: layers.len(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            layers,
            edges,
        })
    }

    /// Layers connected in listed order.
    pub fn chain(name: impl Into<String>, layers: Vec<LayerDescriptor>) -> Self {
        let edges = (1..layers.len()).map(|i| (i - 1, i)).collect();
        Self {
            name: name.into(),
            layers,
            edges,
        }
    }

    /// Builds the graph from `from,to` lines naming layers; `#` starts a
    /// comment. An empty edge list falls back to a chain.
    pub fn with_named_edges(
        name: impl Into<String>,
        layers: Vec<LayerDescriptor>,
        edges: &str,
    ) -> Result<Self, MensaError> {
        let index: HashMap<&str, usize> = layers
            .iter()
            .enumerate()
            .map(|(i, l)| (l.name.as_str(), i))
            .collect();
        let mut parsed = Vec::new();
        for (n, raw) in edges.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| MensaError::Parse {
                line: n + 1,
                message,
            };
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| parse_err(format!("expected `from,to`, got `{line}`")))?;
            let lookup = |s: &str| {
                index
                    .get(s.trim())
                    .copied()
                    .ok_or_else(|| parse_err(format!("unknown layer `{}`", s.trim())))
            };
            parsed.push((lookup(a)?, lookup(b)?));
        }
        if parsed.is_empty() {
            return Ok(Self::chain(name, layers));
        }
        Self::new(name, layers, parsed)
    }

    /// Kahn order; ties resolved by layer index.
    pub fn topological_order(&self) -> Result<Vec<usize>, MensaError> {
        let n = self.layers.len();
        let mut indegree = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            indegree[b] += 1;
            succ[a].push(b);
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() != n {
            return Err(MensaError::CyclicModel);
        }
        Ok(order)
    }
}
