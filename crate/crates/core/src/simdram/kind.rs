use std::fmt;
use std::str::FromStr;

use super::error::OpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Neq,
    Gt,
    Lt,
    Geq,
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReduceOp {
    And,
    Or,
    Xor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MiscOp {
    BitCount,
    Relu,
    IfThenElse,
    Xnor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Arith(ArithOp),
    Rel(RelOp),
    Reduce(ReduceOp),
    Misc(MiscOp),
    ShiftLeft,
}

impl OpKind {
    pub const ALL: [OpKind; 20] = [
        OpKind::Reduce(ReduceOp::And),
        OpKind::Reduce(ReduceOp::Or),
        OpKind::Reduce(ReduceOp::Xor),
        OpKind::Rel(RelOp::Eq),
        OpKind::Rel(RelOp::Neq),
        OpKind::Rel(RelOp::Gt),
        OpKind::Rel(RelOp::Lt),
        OpKind::Rel(RelOp::Geq),
        OpKind::Rel(RelOp::Max),
        OpKind::Rel(RelOp::Min),
        OpKind::Arith(ArithOp::Add),
        OpKind::Arith(ArithOp::Sub),
        OpKind::Arith(ArithOp::Mul),
        OpKind::Arith(ArithOp::Div),
        OpKind::Arith(ArithOp::Abs),
        OpKind::Misc(MiscOp::IfThenElse),
        OpKind::Misc(MiscOp::BitCount),
        OpKind::Misc(MiscOp::Relu),
        OpKind::Misc(MiscOp::Xnor),
        OpKind::ShiftLeft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Arith(ArithOp::Add) => "add",
            OpKind::Arith(ArithOp::Sub) => "sub",
            OpKind::Arith(ArithOp::Mul) => "mul",
            OpKind::Arith(ArithOp::Div) => "div",
            OpKind::Arith(ArithOp::Abs) => "abs",
            OpKind::Rel(RelOp::Eq) => "eq",
            OpKind::Rel(RelOp::Neq) => "neq",
            OpKind::Rel(RelOp::Gt) => "gt",
            OpKind::Rel(RelOp::Lt) => "lt",
            OpKind::Rel(RelOp::Geq) => "geq",
            OpKind::Rel(RelOp::Max) => "max",
            OpKind::Rel(RelOp::Min) => "min",
            OpKind::Reduce(ReduceOp::And) => "andreduce",
            OpKind::Reduce(ReduceOp::Or) => "orreduce",
            OpKind::Reduce(ReduceOp::Xor) => "xorreduce",
            OpKind::Misc(MiscOp::BitCount) => "bitcount",
            OpKind::Misc(MiscOp::Relu) => "relu",
            OpKind::Misc(MiscOp::IfThenElse) => "ifthenelse",
            OpKind::Misc(MiscOp::Xnor) => "xnor",
            OpKind::ShiftLeft => "shiftleft",
        }
    }

    /// Operand count used when none is given: 2 for binary and N-ary
    /// operations, 1 for unary, 3 for if-then-else.
    pub fn default_arity(self) -> usize {
        match self {
            OpKind::Arith(ArithOp::Abs)
            | OpKind::Misc(MiscOp::BitCount)
            | OpKind::Misc(MiscOp::Relu)
            | OpKind::ShiftLeft => 1,
            OpKind::Misc(MiscOp::IfThenElse) => 3,
            _ => 2,
        }
    }

    /// Accepted operand counts as (min, max).
    pub fn arity_range(self) -> (usize, usize) {
        match self {
            OpKind::Reduce(_) => (1, usize::MAX),
            OpKind::Rel(RelOp::Max | RelOp::Min) => (2, usize::MAX),
            k => (k.default_arity(), k.default_arity()),
        }
    }

    pub fn is_binary(self) -> bool {
        self.arity_range() == (2, 2)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self, OpError> {
        let lower = s.to_ascii_lowercase();
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| OpError::UnknownOp(s.to_string()))
    }
}
