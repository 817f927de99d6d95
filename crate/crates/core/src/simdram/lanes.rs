use super::error::{OpError, Result};
use crate::pum::layout::check_width;

/// Values of one SIMD operand, one per DRAM column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaneVector {
    bits: u32,
    signed: bool,
    values: Vec<u64>,
}

pub(crate) fn mask(bits: u32) -> u64 {
    if bits == 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Sign-extend the low `bits` of `v`.
pub(crate) fn to_signed(v: u64, bits: u32) -> i64 {
    let shift = 64 - bits;
    ((v << shift) as i64) >> shift
}

impl LaneVector {
    pub fn new(bits: u32, signed: bool, values: Vec<u64>) -> Result<Self> {
        check_width(bits)?;
        let m = mask(bits);
        if let Some((lane, &value)) = values.iter().enumerate().find(|(_, &v)| v & !m != 0) {
            return Err(OpError::ValueOutOfRange { lane, value, bits });
        }
        Ok(Self { bits, signed, values })
    }

    pub fn unsigned(bits: u32, values: Vec<u64>) -> Result<Self> {
        Self::new(bits, false, values)
    }

    /// Two's-complement encode; values outside the width wrap.
    pub fn from_signed(bits: u32, values: &[i64]) -> Result<Self> {
        check_width(bits)?;
        let m = mask(bits);
        Ok(Self {
            bits,
            signed: true,
            values: values.iter().map(|&v| v as u64 & m).collect(),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    pub fn signed_values(&self) -> Vec<i64> {
        self.values.iter().map(|&v| to_signed(v, self.bits)).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn from_raw(bits: u32, signed: bool, values: Vec<u64>) -> Self {
        Self { bits, signed, values }
    }
}
