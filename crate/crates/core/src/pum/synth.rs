//! AND/OR/NOT to MAJ/NOT synthesis.
//!
//! `AND(a, b)` becomes `MAJ(a, b, 0)` and `OR(a, b)` becomes `MAJ(a, b, 1)`.
//! On top of the direct mapping the builder applies local rewrites while it
//! constructs the graph:
//!
//! * structural hashing (majority operands are commutative),
//! * constant folding and `MAJ(x, x, y) = x`, `MAJ(x, !x, y) = y`,
//! * double-negation removal,
//! * majority recognition: `ab + c(a + b)` and its dual `(a + b)(c + ab)`
//!   collapse to a single `MAJ(a, b, c)`.
//!
//! Nodes made unreachable by the rewrites are dropped at the end.

use std::collections::HashMap;

use super::circuit::{BoolCircuit, BoolGate, MajCircuit, MajGate, NodeId};
use super::error::{PumError, Result};

#[derive(Default)]
struct MajBuilder {
    gates: Vec<MajGate>,
    interned: HashMap<MajGate, NodeId>,
}

impl MajBuilder {
    fn intern(&mut self, gate: MajGate) -> NodeId {
        if let Some(&id) = self.interned.get(&gate) {
            return id;
        }
        let id = NodeId(self.gates.len());
        self.gates.push(gate);
        self.interned.insert(gate, id);
        id
    }

    fn constant(&mut self, value: bool) -> NodeId {
        self.intern(MajGate::Const(value))
    }

    fn input(&mut self, k: usize) -> NodeId {
        self.intern(MajGate::Input(k))
    }

    fn not(&mut self, a: NodeId) -> NodeId {
        match self.gates[a.0] {
            MajGate::Not(x) => x,
            MajGate::Const(v) => self.constant(!v),
            _ => self.intern(MajGate::Not(a)),
        }
    }

    fn complementary(&self, x: NodeId, y: NodeId) -> bool {
        match (self.gates[x.0], self.gates[y.0]) {
            (MajGate::Const(p), MajGate::Const(q)) => p != q,
            (MajGate::Not(inner), _) if inner == y => true,
            (_, MajGate::Not(inner)) if inner == x => true,
            _ => false,
        }
    }

    /// Operands of a majority gate that has one constant operand equal to
    /// `value`: `value = false` recognises AND, `true` recognises OR.
    fn as_two_input(&self, n: NodeId, value: bool) -> Option<(NodeId, NodeId)> {
        let MajGate::Maj(a, b, c) = self.gates[n.0] else {
            return None;
        };
        let is_const = |x: NodeId| self.gates[x.0] == MajGate::Const(value);
        if is_const(a) {
            Some((b, c))
        } else if is_const(b) {
            Some((a, c))
        } else if is_const(c) {
            Some((a, b))
        } else {
            None
        }
    }

    fn same_pair(p: (NodeId, NodeId), q: (NodeId, NodeId)) -> bool {
        (p.0 == q.0 && p.1 == q.1) || (p.0 == q.1 && p.1 == q.0)
    }

    /// Looks for `outer(inner(x, y), inner(z, outer(x, y)))` where outer is
    /// the two-input gate selected by `outer_value` and inner is its dual.
    fn recognise_majority(
        &self,
        p: NodeId,
        q: NodeId,
        outer_value: bool,
    ) -> Option<(NodeId, NodeId, NodeId)> {
        for (first, second) in [(p, q), (q, p)] {
            let Some(xy) = self.as_two_input(first, !outer_value) else {
                continue;
            };
            let Some((u, v)) = self.as_two_input(second, !outer_value) else {
                continue;
            };
            for (z, other) in [(u, v), (v, u)] {
                if let Some(pair) = self.as_two_input(other, outer_value) {
                    if Self::same_pair(pair, xy) {
                        return Some((xy.0, xy.1, z));
                    }
                }
            }
        }
        None
    }

    fn maj(&mut self, a: NodeId, b: NodeId, c: NodeId) -> NodeId {
        let mut ops = [a, b, c];
        ops.sort();
        let [a, b, c] = ops;
        if a == b || a == c {
            return a;
        }
        if b == c {
            return b;
        }
        if self.complementary(a, b) {
            return c;
        }
        if self.complementary(a, c) {
            return b;
        }
        if self.complementary(b, c) {
            return a;
        }
        // a two-input gate is a majority with one constant operand
        for (constant, p, q) in [(a, b, c), (b, a, c), (c, a, b)] {
            if let MajGate::Const(value) = self.gates[constant.0] {
                if let Some((x, y, z)) = self.recognise_majority(p, q, value) {
                    return self.maj(x, y, z);
                }
            }
        }
        self.intern(MajGate::Maj(a, b, c))
    }
}

/// Topological order of the source circuit; errors on cycles and dangling
/// references.
fn topological_order(source: &BoolCircuit) -> Result<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let gates = source.gates();
    let operands = |i: usize| -> Vec<usize> {
        match gates[i] {
            BoolGate::And(a, b) | BoolGate::Or(a, b) => vec![a.0, b.0],
            BoolGate::Not(a) => vec![a.0],
            _ => vec![],
        }
    };
    for i in 0..gates.len() {
        for op in operands(i) {
            if op >= gates.len() {
                return Err(PumError::DanglingOperand {
                    node: i,
                    operand: op,
                });
            }
        }
    }
    let mut marks = vec![Mark::New; gates.len()];
    let mut order = Vec::with_capacity(gates.len());
    for root in 0..gates.len() {
        if marks[root] != Mark::New {
            continue;
        }
        // iterative DFS; the stack holds (node, next operand index)
        let mut stack = vec![(root, 0usize)];
        marks[root] = Mark::Active;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            let ops = operands(node);
            if *next < ops.len() {
                let child = ops[*next];
                *next += 1;
                match marks[child] {
                    Mark::New => {
                        marks[child] = Mark::Active;
                        stack.push((child, 0));
                    }
                    Mark::Active => return Err(PumError::Cyclic { node: child }),
                    Mark::Done => {}
                }
            } else {
                marks[node] = Mark::Done;
                order.push(node);
                stack.pop();
            }
        }
    }
    Ok(order)
}

/// Derive a MAJ/NOT implementation of an AND/OR/NOT circuit.
pub fn synthesize_maj(source: &BoolCircuit) -> Result<MajCircuit> {
    for o in source.outputs() {
        if o.0 >= source.gates().len() {
            return Err(PumError::DanglingOperand {
                node: o.0,
                operand: o.0,
            });
        }
    }
    let order = topological_order(source)?;
    let mut builder = MajBuilder::default();
    let mut mapped = vec![NodeId(usize::MAX); source.gates().len()];
    for i in order {
        mapped[i] = match source.gates()[i] {
            BoolGate::Input(k) => builder.input(k),
            BoolGate::Const(v) => builder.constant(v),
            BoolGate::And(a, b) => {
                let zero = builder.constant(false);
                builder.maj(mapped[a.0], mapped[b.0], zero)
            }
            BoolGate::Or(a, b) => {
                let one = builder.constant(true);
                builder.maj(mapped[a.0], mapped[b.0], one)
            }
            BoolGate::Not(a) => builder.not(mapped[a.0]),
        };
    }
    let outputs: Vec<NodeId> = source.outputs().iter().map(|o| mapped[o.0]).collect();
    compact(builder.gates, outputs, source.num_inputs())
}

/// Drop nodes unreachable from the outputs, preserving relative order.
pub fn compact(gates: Vec<MajGate>, outputs: Vec<NodeId>, num_inputs: usize) -> Result<MajCircuit> {
    let mut live = vec![false; gates.len()];
    for o in &outputs {
        live[o.0] = true;
    }
    for i in (0..gates.len()).rev() {
        if live[i] {
            for op in gates[i].operands() {
                live[op.0] = true;
            }
        }
    }
    let mut remap = vec![NodeId(usize::MAX); gates.len()];
    let mut kept = Vec::new();
    for (i, gate) in gates.iter().enumerate() {
        if !live[i] {
            continue;
        }
        let r = |n: NodeId| remap[n.0];
        let gate = match *gate {
            MajGate::Maj(a, b, c) => MajGate::Maj(r(a), r(b), r(c)),
            MajGate::Not(a) => MajGate::Not(r(a)),
            other => other,
        };
        remap[i] = NodeId(kept.len());
        kept.push(gate);
    }
    let outputs = outputs.into_iter().map(|o| remap[o.0]).collect();
    MajCircuit::new(kept, outputs, num_inputs)
}
