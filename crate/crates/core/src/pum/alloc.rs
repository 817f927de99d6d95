//! Row allocation: turns a MAJ/NOT circuit into row commands.
//!
//! Gates are visited once in topological order (the linear scan). Every
//! intermediate value owns one compute row from its definition to its last
//! read, and the number of simultaneously owned rows may never exceed the
//! compute-row budget. Two properties of the substrate shape the scan:
//!
//! * A triple-row activation overwrites all three operand rows. An operand
//!   that is still read later is first copied into a fresh row and the
//!   copy is consumed instead.
//! * Circuit inputs and constants live in data/constant rows that are never
//!   clobbered, so they are never kept resident: each use copies them in
//!   again (NOT reads them in place).
//!
//! Outputs are copied back to their data rows right after being computed,
//! unless the destination row is also an input that a later gate still
//! reads; then the write-back waits until after that read.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::circuit::{MajCircuit, MajGate, NodeId};
use super::error::{PumError, Result};
use super::program::{Command, MicroProgram};
use super::subarray::RowLayout;

/// Data rows holding each circuit input and receiving each output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OperandBinding {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl OperandBinding {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Self {
        Self { inputs, outputs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub program: MicroProgram,
    /// Largest number of compute rows owned at any point.
    pub peak_rows: usize,
}

/// Allocate rows and emit the command sequence for `circuit`.
pub fn allocate_rows(
    circuit: &MajCircuit,
    binding: &OperandBinding,
    layout: &RowLayout,
) -> Result<MicroProgram> {
    allocate(circuit, binding, layout).map(|a| a.program)
}

fn check_binding(circuit: &MajCircuit, binding: &OperandBinding, layout: &RowLayout) -> Result<()> {
    if binding.inputs.len() < circuit.num_inputs() {
        return Err(PumError::Binding(format!(
            "circuit has {} inputs but {} rows were bound",
            circuit.num_inputs(),
            binding.inputs.len()
        )));
    }
    if binding.outputs.len() != circuit.outputs().len() {
        return Err(PumError::Binding(format!(
            "circuit has {} outputs but {} rows were bound",
            circuit.outputs().len(),
            binding.outputs.len()
        )));
    }
    for &row in binding.inputs.iter().chain(&binding.outputs) {
        if row >= layout.data_rows {
            return Err(PumError::Binding(format!(
                "row {row} is not a data row (data rows are 0..{})",
                layout.data_rows
            )));
        }
    }
    let mut seen = HashSet::new();
    for &row in &binding.outputs {
        if !seen.insert(row) {
            return Err(PumError::Binding(format!("two outputs are bound to row {row}")));
        }
    }
    Ok(())
}

pub fn allocate(
    circuit: &MajCircuit,
    binding: &OperandBinding,
    layout: &RowLayout,
) -> Result<Allocation> {
    circuit.validate()?;
    check_binding(circuit, binding, layout)?;
    let gates = circuit.gates();
    let n = gates.len();

    let mut needed = vec![false; n];
    for o in circuit.outputs() {
        needed[o.0] = true;
    }
    for i in (0..n).rev() {
        if needed[i] {
            for op in gates[i].operands() {
                needed[op.0] = true;
            }
        }
    }
    let steps: Vec<usize> = (0..n).filter(|&i| needed[i] && gates[i].is_logic()).collect();
    let mut step_of = vec![usize::MAX; n];
    for (s, &node) in steps.iter().enumerate() {
        step_of[node] = s;
    }

    // Event times: gate at step s runs at 2s+1, write-backs after it at 2s+2,
    // write-backs of inputs/constants at time 0.
    let mut live_end = vec![0usize; n];
    let mut last_input_read: BTreeMap<usize, usize> = BTreeMap::new();
    for (s, &node) in steps.iter().enumerate() {
        let t = 2 * s + 1;
        for op in gates[node].operands() {
            match gates[op.0] {
                MajGate::Input(k) => {
                    let row = binding.inputs[k];
                    let e = last_input_read.entry(row).or_insert(0);
                    *e = (*e).max(t);
                }
                MajGate::Maj(..) | MajGate::Not(_) => live_end[op.0] = live_end[op.0].max(t),
                MajGate::Const(_) => {}
            }
        }
    }
    let mut writebacks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, o) in circuit.outputs().iter().enumerate() {
        let base = if gates[o.0].is_logic() {
            2 * step_of[o.0] + 2
        } else {
            0
        };
        let dest = binding.outputs[k];
        let after_reads = last_input_read.get(&dest).map_or(0, |&t| t + 1);
        let mut when = base.max(after_reads);
        when += when % 2;
        writebacks.entry(when).or_default().push(k);
        if gates[o.0].is_logic() {
            live_end[o.0] = live_end[o.0].max(when);
        }
    }

    let mut program = MicroProgram::new();
    let mut uses_const = [false; 2];
    for &node in &steps {
        for op in gates[node].operands() {
            if let MajGate::Const(v) = gates[op.0] {
                uses_const[v as usize] = true;
            }
        }
    }
    for o in circuit.outputs() {
        if let MajGate::Const(v) = gates[o.0] {
            uses_const[v as usize] = true;
        }
    }
    for value in [false, true] {
        if uses_const[value as usize] {
            program.push(Command::InitConstant {
                row: layout.const_row(value),
                value,
            });
        }
    }

    let budget = layout.compute_rows();
    let mut free: BTreeSet<usize> = layout.compute.clone().collect();
    let mut loc: Vec<Option<usize>> = vec![None; n];
    let mut overwritten: HashSet<usize> = HashSet::new();
    let mut peak = 0usize;
    // nodes to release once the write-back slot at a given time has passed
    let mut release_at: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &node in &steps {
        if live_end[node] % 2 == 0 {
            release_at.entry(live_end[node]).or_default().push(node);
        }
    }

    let source_row = |v: NodeId, loc: &[Option<usize>], overwritten: &HashSet<usize>| -> Result<usize> {
        match gates[v.0] {
            MajGate::Input(k) => {
                let row = binding.inputs[k];
                if overwritten.contains(&row) {
                    Err(PumError::OperandAliasing { row })
                } else {
                    Ok(row)
                }
            }
            MajGate::Const(value) => Ok(layout.const_row(value)),
            _ => Ok(loc[v.0].expect("intermediate read after release")),
        }
    };

    let mut do_writebacks = |time: usize,
                             program: &mut MicroProgram,
                             loc: &mut Vec<Option<usize>>,
                             free: &mut BTreeSet<usize>,
                             overwritten: &mut HashSet<usize>|
     -> Result<()> {
        if let Some(ks) = writebacks.remove(&time) {
            for k in ks {
                let v = circuit.outputs()[k];
                let src = source_row(v, loc, overwritten)?;
                let dst = binding.outputs[k];
                if src != dst {
                    program.push(Command::CopyRow { src, dst });
                }
                overwritten.insert(dst);
            }
        }
        if let Some(nodes) = release_at.remove(&time) {
            for v in nodes {
                if let Some(row) = loc[v].take() {
                    free.insert(row);
                }
            }
        }
        Ok(())
    };

    do_writebacks(0, &mut program, &mut loc, &mut free, &mut overwritten)?;

    for (s, &node) in steps.iter().enumerate() {
        let t = 2 * s + 1;
        let dying = |v: NodeId| gates[v.0].is_logic() && live_end[v.0] <= t;
        match gates[node] {
            MajGate::Maj(a, b, c) => {
                let ops = [a, b, c];
                let mut rows: [Option<usize>; 3] = [None; 3];
                let mut claimed: Vec<NodeId> = Vec::new();
                for i in 0..3 {
                    if dying(ops[i]) && !claimed.contains(&ops[i]) {
                        rows[i] = loc[ops[i].0];
                        claimed.push(ops[i]);
                    }
                }
                let missing = rows.iter().filter(|r| r.is_none()).count();
                let in_use = budget - free.len();
                if missing > free.len() {
                    return Err(PumError::InsufficientRows {
                        gate: node,
                        needed: in_use + missing,
                        available: budget,
                    });
                }
                for i in 0..3 {
                    if rows[i].is_none() {
                        let src = source_row(ops[i], &loc, &overwritten)?;
                        let dst = free.pop_first().expect("checked above");
                        program.push(Command::CopyRow { src, dst });
                        rows[i] = Some(dst);
                    }
                }
                peak = peak.max(budget - free.len());
                let [r1, r2, r3] = rows.map(|r| r.expect("all operand rows assigned"));
                program.push(Command::TripleActivate(r1, r2, r3));
                for v in claimed {
                    loc[v.0] = None;
                }
                loc[node] = Some(r1);
                free.insert(r2);
                free.insert(r3);
            }
            MajGate::Not(a) => {
                let src = source_row(a, &loc, &overwritten)?;
                let Some(dst) = free.pop_first() else {
                    return Err(PumError::InsufficientRows {
                        gate: node,
                        needed: budget + 1,
                        available: budget,
                    });
                };
                peak = peak.max(budget - free.len());
                program.push(Command::NotActivate { src, dst });
                if dying(a) {
                    if let Some(row) = loc[a.0].take() {
                        free.insert(row);
                    }
                }
                loc[node] = Some(dst);
            }
            _ => unreachable!("steps only contain logic gates"),
        }
        do_writebacks(t + 1, &mut program, &mut loc, &mut free, &mut overwritten)?;
    }
    debug_assert!(writebacks.is_empty());

    Ok(Allocation {
        program,
        peak_rows: peak,
    })
}
