//! Gate-level circuits: the AND/OR/NOT source form and the MAJ/NOT form that
//! maps directly onto row activations.

use std::fmt;
use std::str::FromStr;

use super::error::{PumError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoolGate {
    Input(usize),
    Const(bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Not(NodeId),
}

impl BoolGate {
    fn operands(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            BoolGate::And(a, b) | BoolGate::Or(a, b) => (Some(a), Some(b)),
            BoolGate::Not(a) => (Some(a), None),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }
}

/// A Boolean circuit over AND2/OR2/NOT gates.
///
/// Gates built through the helper methods are always in topological order.
/// [`BoolCircuit::from_parts`] accepts arbitrary node references so that
/// malformed (e.g. cyclic) circuits can be represented and rejected by the
/// synthesizer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoolCircuit {
    gates: Vec<BoolGate>,
    outputs: Vec<NodeId>,
    num_inputs: usize,
}

impl BoolCircuit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(gates: Vec<BoolGate>, outputs: Vec<NodeId>) -> Self {
        let num_inputs = gates
            .iter()
            .filter_map(|g| match g {
                BoolGate::Input(k) => Some(k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        Self {
            gates,
            outputs,
            num_inputs,
        }
    }

    pub fn gates(&self) -> &[BoolGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    fn push(&mut self, gate: BoolGate) -> NodeId {
        self.gates.push(gate);
        NodeId(self.gates.len() - 1)
    }

    /// Declare the next primary input.
    pub fn input(&mut self) -> NodeId {
        let k = self.num_inputs;
        self.num_inputs += 1;
        self.push(BoolGate::Input(k))
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(BoolGate::Const(value))
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(BoolGate::And(a, b))
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(BoolGate::Or(a, b))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        self.push(BoolGate::Not(a))
    }

    pub fn xor(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let any = self.or(a, b);
        let both = self.and(a, b);
        let not_both = self.not(both);
        self.and(any, not_both)
    }

    /// `ab + !(a + b)`: expressed without a trailing inverter.
    pub fn xnor(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let both = self.and(a, b);
        let any = self.or(a, b);
        let none = self.not(any);
        self.or(both, none)
    }

    /// Three-input majority written as `ab + c(a + b)`.
    pub fn maj(&mut self, a: NodeId, b: NodeId, c: NodeId) -> NodeId {
        let both = self.and(a, b);
        let any = self.or(a, b);
        let gated = self.and(c, any);
        self.or(both, gated)
    }

    /// `sel ? a : b`
    pub fn mux(&mut self, sel: NodeId, a: NodeId, b: NodeId) -> NodeId {
        let take_a = self.and(sel, a);
        let nsel = self.not(sel);
        let take_b = self.and(nsel, b);
        self.or(take_a, take_b)
    }

    /// Full adder returning `(sum, carry)`. The sum is written in the
    /// majority-friendly form `MAJ(!cout, cin, MAJ(a, b, !cin))`.
    pub fn full_add(&mut self, a: NodeId, b: NodeId, cin: NodeId) -> (NodeId, NodeId) {
        let ncin = self.not(cin);
        let inner = self.maj(a, b, ncin);
        let cout = self.maj(a, b, cin);
        let ncout = self.not(cout);
        let sum = self.maj(ncout, cin, inner);
        (sum, cout)
    }

    pub fn output(&mut self, node: NodeId) {
        self.outputs.push(node);
    }

    /// Bit-parallel evaluation: `inputs[k]` holds 64 assignments of input
    /// `k`; returns one word per output. Requires topological order.
    pub fn eval_words(&self, inputs: &[u64]) -> Result<Vec<u64>> {
        let mut values = vec![0u64; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            for op in gate.operands() {
                if op.0 >= i {
                    return Err(PumError::Cyclic { node: i });
                }
            }
            values[i] = match *gate {
                BoolGate::Input(k) => *inputs.get(k).ok_or_else(|| {
                    PumError::Binding(format!("missing value for input {k}"))
                })?,
                BoolGate::Const(v) => {
                    if v {
                        u64::MAX
                    } else {
                        0
                    }
                }
                BoolGate::And(a, b) => values[a.0] & values[b.0],
                BoolGate::Or(a, b) => values[a.0] | values[b.0],
                BoolGate::Not(a) => !values[a.0],
            };
        }
        self.outputs
            .iter()
            .map(|o| {
                values.get(o.0).copied().ok_or(PumError::DanglingOperand {
                    node: o.0,
                    operand: o.0,
                })
            })
            .collect()
    }
}

impl fmt::Display for BoolCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for gate in &self.gates {
            match gate {
                BoolGate::Input(k) => writeln!(f, "IN {k}")?,
                BoolGate::Const(v) => writeln!(f, "CONST {}", *v as u8)?,
                BoolGate::And(a, b) => writeln!(f, "AND {} {}", a.0, b.0)?,
                BoolGate::Or(a, b) => writeln!(f, "OR {} {}", a.0, b.0)?,
                BoolGate::Not(a) => writeln!(f, "NOT {}", a.0)?,
            }
        }
        let outs: Vec<String> = self.outputs.iter().map(|o| o.0.to_string()).collect();
        writeln!(f, "OUT {}", outs.join(" "))
    }
}

/// Parses the netlist format produced by `Display`: one gate per line,
/// node ids are line positions (comments with `#` and blank lines skipped).
impl FromStr for BoolCircuit {
    type Err = PumError;

    fn from_str(s: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut outputs = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| PumError::Parse {
                line: idx + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let op = fields.next().unwrap_or_default().to_ascii_uppercase();
            let args: Vec<usize> = fields
                .map(|t| t.parse::<usize>().map_err(|e| parse_err(format!("`{t}`: {e}"))))
                .collect::<Result<_>>()?;
            let want = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(parse_err(format!("{op} takes {n} operands, got {}", args.len())))
                }
            };
            match op.as_str() {
                "IN" => {
                    want(1)?;
                    gates.push(BoolGate::Input(args[0]));
                }
                "CONST" => {
                    want(1)?;
                    gates.push(BoolGate::Const(args[0] != 0));
                }
                "AND" => {
                    want(2)?;
                    gates.push(BoolGate::And(NodeId(args[0]), NodeId(args[1])));
                }
                "OR" => {
                    want(2)?;
                    gates.push(BoolGate::Or(NodeId(args[0]), NodeId(args[1])));
                }
                "NOT" => {
                    want(1)?;
                    gates.push(BoolGate::Not(NodeId(args[0])));
                }
                "OUT" => outputs.extend(args.into_iter().map(NodeId)),
                _ => return Err(PumError::UnknownGate(op)),
            }
        }
        Ok(BoolCircuit::from_parts(gates, outputs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MajGate {
    Input(usize),
    Const(bool),
    Maj(NodeId, NodeId, NodeId),
    Not(NodeId),
}

impl MajGate {
    pub fn operands(&self) -> impl Iterator<Item = NodeId> {
        let ops: [Option<NodeId>; 3] = match *self {
            MajGate::Maj(a, b, c) => [Some(a), Some(b), Some(c)],
            MajGate::Not(a) => [Some(a), None, None],
            _ => [None, None, None],
        };
        ops.into_iter().flatten()
    }

    pub fn is_logic(&self) -> bool {
        matches!(self, MajGate::Maj(..) | MajGate::Not(_))
    }
}

/// A circuit of three-input majority and NOT gates in topological order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MajCircuit {
    gates: Vec<MajGate>,
    outputs: Vec<NodeId>,
    num_inputs: usize,
}

impl MajCircuit {
    /// Build and validate; gates must already be topologically ordered.
    pub fn new(gates: Vec<MajGate>, outputs: Vec<NodeId>, num_inputs: usize) -> Result<Self> {
        let circuit = Self {
            gates,
            outputs,
            num_inputs,
        };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, gate) in self.gates.iter().enumerate() {
            for op in gate.operands() {
                if op.0 >= self.gates.len() {
                    return Err(PumError::DanglingOperand {
                        node: i,
                        operand: op.0,
                    });
                }
                if op.0 >= i {
                    return Err(PumError::Cyclic { node: i });
                }
            }
            if let MajGate::Input(k) = gate {
                if *k >= self.num_inputs {
                    return Err(PumError::Binding(format!(
                        "input {k} exceeds declared input count {}",
                        self.num_inputs
                    )));
                }
            }
        }
        for o in &self.outputs {
            if o.0 >= self.gates.len() {
                return Err(PumError::DanglingOperand {
                    node: o.0,
                    operand: o.0,
                });
            }
        }
        Ok(())
    }

    pub fn gates(&self) -> &[MajGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    pub fn maj_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, MajGate::Maj(..)))
            .count()
    }

    pub fn not_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, MajGate::Not(_)))
            .count()
    }

    pub fn eval_words(&self, inputs: &[u64]) -> Result<Vec<u64>> {
        let mut values = vec![0u64; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            values[i] = match *gate {
                MajGate::Input(k) => *inputs.get(k).ok_or_else(|| {
                    PumError::Binding(format!("missing value for input {k}"))
                })?,
                MajGate::Const(v) => {
                    if v {
                        u64::MAX
                    } else {
                        0
                    }
                }
                MajGate::Maj(a, b, c) => {
                    let (a, b, c) = (values[a.0], values[b.0], values[c.0]);
                    (a & b) | (b & c) | (a & c)
                }
                MajGate::Not(a) => !values[a.0],
            };
        }
        Ok(self.outputs.iter().map(|o| values[o.0]).collect())
    }
}

/// Truth-table columns for `num_inputs` variables, 64 assignments per word:
/// assignment `j` sets input `k` to bit `k` of `j`.
pub fn truth_table_inputs(num_inputs: usize, block: usize) -> Vec<u64> {
    (0..num_inputs)
        .map(|k| {
            let mut word = 0u64;
            for bit in 0..64 {
                let assignment = block * 64 + bit;
                if assignment >> k & 1 == 1 {
                    word |= 1 << bit;
                }
            }
            word
        })
        .collect()
}

/// Maximum number of inputs compared exhaustively.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

/// Exhaustive functional equivalence of a source circuit and its MAJ/NOT form.
pub fn equivalent(source: &BoolCircuit, maj: &MajCircuit) -> Result<bool> {
    let n = source.num_inputs().max(maj.num_inputs());
    if n > MAX_EXHAUSTIVE_INPUTS {
        return Err(PumError::InvalidConfig(format!(
            "{n} inputs exceed the exhaustive check limit of {MAX_EXHAUSTIVE_INPUTS}"
        )));
    }
    if source.outputs().len() != maj.outputs().len() {
        return Ok(false);
    }
    let assignments = 1usize << n;
    let blocks = assignments.div_ceil(64);
    let valid = if assignments < 64 {
        (1u64 << assignments) - 1
    } else {
        u64::MAX
    };
    for block in 0..blocks {
        let inputs = truth_table_inputs(n, block);
        let lhs = source.eval_words(&inputs)?;
        let rhs = maj.eval_words(&inputs)?;
        if lhs.iter().zip(&rhs).any(|(a, b)| (a ^ b) & valid != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}
