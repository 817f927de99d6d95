//! Bit-serial circuits for every operation, emitted as a chain of small
//! fragments. Each fragment is a Boolean circuit whose inputs and outputs
//! are data rows; keeping fragments small keeps the number of live
//! intermediates inside the compute-row budget.

use std::collections::HashMap;

use super::error::Result;
use super::kind::{ArithOp, MiscOp, OpKind, ReduceOp, RelOp};
use crate::pum::{
    allocate_rows, synthesize_maj, BoolCircuit, MicroProgram, NodeId, OperandBinding, RowLayout,
};

#[derive(Default)]
struct Frag {
    c: BoolCircuit,
    inputs: Vec<usize>,
    seen: HashMap<usize, NodeId>,
    outputs: Vec<usize>,
}

impl Frag {
    fn row(&mut self, row: usize) -> NodeId {
        if let Some(&n) = self.seen.get(&row) {
            return n;
        }
        let n = self.c.input();
        self.inputs.push(row);
        self.seen.insert(row, n);
        n
    }

    /// Row if present, constant zero otherwise.
    fn row_or_zero(&mut self, row: Option<usize>) -> NodeId {
        match row {
            Some(r) => self.row(r),
            None => self.c.constant(false),
        }
    }

    fn put(&mut self, node: NodeId, row: usize) {
        self.c.output(node);
        self.outputs.push(row);
    }

    fn greater(&mut self, x: usize, y: usize, n: usize, signed: bool) -> NodeId {
        let mut g = self.c.constant(false);
        for j in 0..n {
            let (xb, yb) = (self.row(x + j), self.row(y + j));
            g = if signed && j == n - 1 {
                let nx = self.c.not(xb);
                self.c.maj(nx, yb, g)
            } else {
                let ny = self.c.not(yb);
                self.c.maj(xb, ny, g)
            };
        }
        g
    }

    /// `dst = (src ^ s) + s` for sign `s`, i.e. conditional negation.
    fn cond_negate(&mut self, src: usize, dst: usize, n: usize, sign: NodeId) {
        let mut carry = sign;
        for j in 0..n {
            let b = self.row(src + j);
            let x = self.c.xor(b, sign);
            let sum = self.c.xor(x, carry);
            carry = self.c.and(x, carry);
            self.put(sum, dst + j);
        }
    }

    fn zero_fill(&mut self, rows: impl Iterator<Item = usize>) {
        for r in rows {
            let z = self.c.constant(false);
            self.put(z, r);
        }
    }
}

struct Emitter<'a> {
    layout: &'a RowLayout,
    program: MicroProgram,
}

impl Emitter<'_> {
    fn emit(&mut self, frag: Frag) -> Result<()> {
        let maj = synthesize_maj(&frag.c)?;
        let binding = OperandBinding::new(frag.inputs, frag.outputs);
        let part = allocate_rows(&maj, &binding, self.layout)?;
        self.program.append(&part);
        Ok(())
    }
}

/// Placement of operands in data rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPlan {
    pub inputs: Vec<usize>,
    pub output: usize,
    /// One past the highest data row touched.
    pub rows_used: usize,
}

pub(crate) fn build_program(
    kind: OpKind,
    n: usize,
    signed: bool,
    arity: usize,
    shift: usize,
    layout: &RowLayout,
) -> Result<(MicroProgram, RowPlan)> {
    let slot = |i: usize| i * n;
    let mut e = Emitter {
        layout,
        program: MicroProgram::new(),
    };
    let plan = |inputs: usize, output: usize, rows_used: usize| RowPlan {
        inputs: (0..inputs).map(slot).collect(),
        output,
        rows_used,
    };

    let result = match kind {
        OpKind::Arith(op @ (ArithOp::Add | ArithOp::Sub)) => {
            let (a, b, o) = (slot(0), slot(1), slot(2));
            let mut f = Frag::default();
            let mut carry = f.c.constant(op == ArithOp::Sub);
            for j in 0..n {
                let x = f.row(a + j);
                let mut y = f.row(b + j);
                if op == ArithOp::Sub {
                    y = f.c.not(y);
                }
                let (s, c) = f.c.full_add(x, y, carry);
                f.put(s, o + j);
                carry = c;
            }
            e.emit(f)?;
            plan(2, o, slot(3))
        }
        OpKind::Arith(ArithOp::Mul) => {
            let (a, b, o) = (slot(0), slot(1), slot(2));
            let mut f = Frag::default();
            let b0 = f.row(b);
            for j in 0..n {
                let x = f.row(a + j);
                let p = f.c.and(x, b0);
                f.put(p, o + j);
            }
            e.emit(f)?;
            for i in 1..n {
                let mut f = Frag::default();
                let bi = f.row(b + i);
                let mut carry = f.c.constant(false);
                for j in i..n {
                    let x = f.row(a + j - i);
                    let addend = f.c.and(x, bi);
                    let acc = f.row(o + j);
                    let (s, c) = f.c.full_add(acc, addend, carry);
                    f.put(s, o + j);
                    carry = c;
                }
                e.emit(f)?;
            }
            plan(2, o, slot(3))
        }
        OpKind::Arith(ArithOp::Div) => {
            build_div(&mut e, n, signed)?;
            plan(2, slot(2), slot(6) + 2)
        }
        OpKind::Arith(ArithOp::Abs) => {
            let (a, o) = (slot(0), slot(1));
            let mut f = Frag::default();
            let sign = f.row(a + n - 1);
            f.cond_negate(a, o, n, sign);
            e.emit(f)?;
            plan(1, o, slot(2))
        }
        OpKind::Misc(MiscOp::Relu) => {
            let (a, o) = (slot(0), slot(1));
            let mut f = Frag::default();
            let sign = f.row(a + n - 1);
            let keep = f.c.not(sign);
            for j in 0..n {
                let x = f.row(a + j);
                let r = f.c.and(x, keep);
                f.put(r, o + j);
            }
            e.emit(f)?;
            plan(1, o, slot(2))
        }
        OpKind::Rel(op @ (RelOp::Eq | RelOp::Neq | RelOp::Gt | RelOp::Lt | RelOp::Geq)) => {
            let (a, b, o) = (slot(0), slot(1), slot(2));
            let mut f = Frag::default();
            let r = match op {
                RelOp::Eq | RelOp::Neq => {
                    let mut acc = f.c.constant(true);
                    for j in 0..n {
                        let (x, y) = (f.row(a + j), f.row(b + j));
                        let same = f.c.xnor(x, y);
                        acc = f.c.and(acc, same);
                    }
                    if op == RelOp::Neq {
                        f.c.not(acc)
                    } else {
                        acc
                    }
                }
                RelOp::Gt => f.greater(a, b, n, signed),
                RelOp::Lt => f.greater(b, a, n, signed),
                _ => {
                    let lt = f.greater(b, a, n, signed);
                    f.c.not(lt)
                }
            };
            f.put(r, o);
            f.zero_fill(o + 1..o + n);
            e.emit(f)?;
            plan(2, o, slot(3))
        }
        OpKind::Rel(op) => {
            // Max / Min across `arity` vectors, accumulated into the output
            let o = slot(arity);
            let mut f = Frag::default();
            for j in 0..n {
                let x = f.row(j);
                f.put(x, o + j);
            }
            e.emit(f)?;
            for i in 1..arity {
                let s = slot(i);
                let mut f = Frag::default();
                let take = if op == RelOp::Max {
                    f.greater(s, o, n, signed)
                } else {
                    f.greater(o, s, n, signed)
                };
                for j in 0..n {
                    let (x, cur) = (f.row(s + j), f.row(o + j));
                    let r = f.c.mux(take, x, cur);
                    f.put(r, o + j);
                }
                e.emit(f)?;
            }
            plan(arity, o, slot(arity + 1))
        }
        OpKind::Reduce(op) => {
            let o = slot(arity);
            let mut f = Frag::default();
            for j in 0..n {
                let mut acc = f.row(j);
                for i in 1..arity {
                    let x = f.row(slot(i) + j);
                    acc = match op {
                        ReduceOp::And => f.c.and(acc, x),
                        ReduceOp::Or => f.c.or(acc, x),
                        ReduceOp::Xor => f.c.xor(acc, x),
                    };
                }
                f.put(acc, o + j);
            }
            e.emit(f)?;
            plan(arity, o, slot(arity + 1))
        }
        OpKind::Misc(MiscOp::IfThenElse) => {
            let (p, a, b, o) = (slot(0), slot(1), slot(2), slot(3));
            let mut f = Frag::default();
            let sel = f.row(p);
            for j in 0..n {
                let (x, y) = (f.row(a + j), f.row(b + j));
                let r = f.c.mux(sel, x, y);
                f.put(r, o + j);
            }
            e.emit(f)?;
            plan(3, o, slot(4))
        }
        OpKind::Misc(MiscOp::BitCount) => {
            let (a, o) = (slot(0), slot(1));
            let mut f = Frag::default();
            let first = f.row(a);
            f.put(first, o);
            f.zero_fill(o + 1..o + n);
            e.emit(f)?;
            for j in 1..n {
                // the running count is at most j + 1
                let width = (usize::BITS - (j + 1).leading_zeros()) as usize;
                let mut f = Frag::default();
                let mut carry = f.row(a + j);
                for k in 0..width {
                    let cur = f.row(o + k);
                    let s = f.c.xor(cur, carry);
                    carry = f.c.and(cur, carry);
                    f.put(s, o + k);
                }
                e.emit(f)?;
            }
            plan(1, o, slot(2))
        }
        OpKind::Misc(MiscOp::Xnor) => {
            let (a, b, o) = (slot(0), slot(1), slot(2));
            let mut f = Frag::default();
            for j in 0..n {
                let (x, y) = (f.row(a + j), f.row(b + j));
                let r = f.c.xnor(x, y);
                f.put(r, o + j);
            }
            e.emit(f)?;
            plan(2, o, slot(3))
        }
        OpKind::ShiftLeft => {
            // The source sits one slot up; the result window starts `shift`
            // rows below it, so only the vacated low rows need writing.
            let a = slot(1);
            let o = a - shift;
            if shift > 0 {
                let mut f = Frag::default();
                f.zero_fill(o..a);
                e.emit(f)?;
            }
            RowPlan {
                inputs: vec![a],
                output: o,
                rows_used: slot(2),
            }
        }
    };
    Ok((e.program, result))
}

/// Restoring division. Rows: dividend, divisor, quotient, then a trial
/// difference, two remainder buffers and two single rows (quotient bit,
/// quotient sign). Signed division divides magnitudes and fixes the sign.
fn build_div(e: &mut Emitter, n: usize, signed: bool) -> Result<()> {
    let slot = |i: usize| i * n;
    let (a, b, o, t) = (slot(0), slot(1), slot(2), slot(3));
    let bufs = [slot(4), slot(5)];
    let (q_row, sign_row) = (slot(6), slot(6) + 1);

    let dividend = if signed {
        let mut f = Frag::default();
        let (sa, sb) = (f.row(a + n - 1), f.row(b + n - 1));
        let s = f.c.xor(sa, sb);
        f.put(s, sign_row);
        e.emit(f)?;
        for (src, dst) in [(a, o), (b, b)] {
            let mut f = Frag::default();
            let sign = f.row(src + n - 1);
            f.cond_negate(src, dst, n, sign);
            e.emit(f)?;
        }
        o
    } else {
        a
    };

    let shifted = |f: &mut Frag, cur: Option<usize>, i: usize, j: usize| {
        if j == 0 {
            f.row(dividend + i)
        } else {
            f.row_or_zero(cur.map(|r| r + j - 1))
        }
    };

    let mut cur: Option<usize> = None;
    for (step, i) in (0..n).rev().enumerate() {
        // trial subtraction of the divisor from the shifted remainder
        let mut f = Frag::default();
        let mut carry = f.c.constant(true);
        for j in 0..n {
            let s = shifted(&mut f, cur, i, j);
            let d = f.row(b + j);
            let nd = f.c.not(d);
            let (diff, c) = f.c.full_add(s, nd, carry);
            f.put(diff, t + j);
            carry = c;
        }
        let top = f.row_or_zero(cur.map(|r| r + n - 1));
        let q = f.c.or(top, carry);
        f.put(q, q_row);
        e.emit(f)?;

        // keep the difference if it did not borrow
        let mut f = Frag::default();
        let q = f.row(q_row);
        f.put(q, o + i);
        if i > 0 {
            let next = bufs[step % 2];
            for j in 0..n {
                let s = shifted(&mut f, cur, i, j);
                let d = f.row(t + j);
                let r = f.c.mux(q, d, s);
                f.put(r, next + j);
            }
            cur = Some(next);
        }
        e.emit(f)?;
    }

    if signed {
        let mut f = Frag::default();
        let sign = f.row(sign_row);
        f.cond_negate(o, o, n, sign);
        e.emit(f)?;
    }
    Ok(())
}
