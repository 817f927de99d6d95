//! One DRAM subarray modeled as a bit matrix with per-row roles.
//!
//! Rows are stored as packed `u64` words, one bit per bitline (column). The
//! reserved rows sit at the top of the subarray, in this order:
//! `compute_rows` general compute rows, the all-zeros constant row, the
//! all-ones constant row, and one dual-contact row.

use std::ops::Range;

use super::error::{PumError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowRole {
    Data,
    Compute,
    ConstantZero,
    ConstantOne,
    DualContact,
}

impl RowRole {
    /// Rows that may take part in a triple-row activation.
    pub fn is_compute_capable(self) -> bool {
        !matches!(self, RowRole::Data)
    }
}

/// Geometry of a subarray and the size of its reserved compute region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubarrayConfig {
    pub rows: usize,
    pub columns: usize,
    pub compute_rows: usize,
}

impl Default for SubarrayConfig {
    fn default() -> Self {
        Self {
            rows: 512,
            columns: 8192,
            compute_rows: 6,
        }
    }
}

impl SubarrayConfig {
    pub fn new(rows: usize, columns: usize, compute_rows: usize) -> Result<Self> {
        let config = Self {
            rows,
            columns,
            compute_rows,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rows.is_power_of_two() {
            return Err(PumError::InvalidConfig(format!(
                "row count {} is not a power of two",
                self.rows
            )));
        }
        if self.compute_rows < 3 {
            return Err(PumError::InvalidConfig(format!(
                "a triple-row activation needs at least 3 compute rows, got {}",
                self.compute_rows
            )));
        }
        if self.columns == 0 {
            return Err(PumError::InvalidConfig("subarray has no columns".into()));
        }
        if self.compute_rows + 3 >= self.rows {
            return Err(PumError::InvalidConfig(format!(
                "{} rows cannot hold {} reserved rows and any data",
                self.rows,
                self.compute_rows + 3
            )));
        }
        Ok(())
    }

    pub fn layout(&self) -> RowLayout {
        let data_rows = self.rows - self.compute_rows - 3;
        RowLayout {
            data_rows,
            compute: data_rows..data_rows + self.compute_rows,
            const_zero: self.rows - 3,
            const_one: self.rows - 2,
            dual_contact: self.rows - 1,
        }
    }
}

/// Row indices of the reserved regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowLayout {
    pub data_rows: usize,
    pub compute: Range<usize>,
    pub const_zero: usize,
    pub const_one: usize,
    pub dual_contact: usize,
}

impl RowLayout {
    pub fn compute_rows(&self) -> usize {
        self.compute.len()
    }

    pub fn const_row(&self, value: bool) -> usize {
        if value {
            self.const_one
        } else {
            self.const_zero
        }
    }

    pub fn role(&self, row: usize) -> RowRole {
        if row < self.data_rows {
            RowRole::Data
        } else if self.compute.contains(&row) {
            RowRole::Compute
        } else if row == self.const_zero {
            RowRole::ConstantZero
        } else if row == self.const_one {
            RowRole::ConstantOne
        } else {
            RowRole::DualContact
        }
    }
}

/// Number of command groups issued against a subarray, by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActivationLog {
    pub copies: u64,
    pub triple_activations: u64,
    pub not_activations: u64,
    pub constant_inits: u64,
}

impl ActivationLog {
    pub fn total(&self) -> u64 {
        self.copies + self.triple_activations + self.not_activations + self.constant_inits
    }
}

#[derive(Debug, Clone)]
pub struct SubarrayState {
    config: SubarrayConfig,
    layout: RowLayout,
    words_per_row: usize,
    tail_mask: u64,
    bits: Vec<u64>,
    log: ActivationLog,
}

impl SubarrayState {
    pub fn new(config: SubarrayConfig) -> Result<Self> {
        config.validate()?;
        let words_per_row = config.columns.div_ceil(64);
        let tail = config.columns % 64;
        let tail_mask = if tail == 0 { u64::MAX } else { (1u64 << tail) - 1 };
        let mut state = Self {
            layout: config.layout(),
            config,
            words_per_row,
            tail_mask,
            bits: vec![0; words_per_row * config.rows],
            log: ActivationLog::default(),
        };
        state.fill_row(state.layout.const_one, true);
        Ok(state)
    }

    pub fn config(&self) -> &SubarrayConfig {
        &self.config
    }

    pub fn layout(&self) -> &RowLayout {
        &self.layout
    }

    pub fn rows(&self) -> usize {
        self.config.rows
    }

    pub fn columns(&self) -> usize {
        self.config.columns
    }

    pub fn role(&self, row: usize) -> RowRole {
        self.layout.role(row)
    }

    pub fn activation_log(&self) -> ActivationLog {
        self.log
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    fn check(&self, row: usize) -> Result<()> {
        if row >= self.config.rows {
            Err(PumError::OutOfBounds {
                row,
                rows: self.config.rows,
            })
        } else {
            Ok(())
        }
    }

    fn span(&self, row: usize) -> Range<usize> {
        row * self.words_per_row..(row + 1) * self.words_per_row
    }

    /// Packed contents of `row`; bits beyond `columns` are always zero.
    pub fn row(&self, row: usize) -> Result<&[u64]> {
        self.check(row)?;
        Ok(&self.bits[self.span(row)])
    }

    /// Overwrite a row from packed words (host-side data load, not logged).
    pub fn write_row(&mut self, row: usize, words: &[u64]) -> Result<()> {
        self.check(row)?;
        if words.len() != self.words_per_row {
            return Err(PumError::InvalidConfig(format!(
                "row write of {} words into a {}-word row",
                words.len(),
                self.words_per_row
            )));
        }
        let span = self.span(row);
        self.bits[span.clone()].copy_from_slice(words);
        self.bits[span.end - 1] &= self.tail_mask;
        Ok(())
    }

    pub fn read_bit(&self, row: usize, column: usize) -> Result<bool> {
        self.check(row)?;
        if column >= self.config.columns {
            return Err(PumError::TooManyLanes {
                lanes: column + 1,
                columns: self.config.columns,
            });
        }
        let word = self.bits[row * self.words_per_row + column / 64];
        Ok(word >> (column % 64) & 1 == 1)
    }

    fn fill_row(&mut self, row: usize, value: bool) {
        let fill = if value { u64::MAX } else { 0 };
        let span = self.span(row);
        self.bits[span.clone()].fill(fill);
        self.bits[span.end - 1] &= self.tail_mask;
    }

    /// Simultaneously activate three rows: every bitline settles to the
    /// majority of the three cells and the result is written back into all
    /// three rows.
    pub fn maj3_activate(&mut self, r1: usize, r2: usize, r3: usize) -> Result<()> {
        for row in [r1, r2, r3] {
            self.check(row)?;
            let role = self.role(row);
            if !role.is_compute_capable() {
                return Err(PumError::NonComputeRow { row, role });
            }
        }
        if r1 == r2 || r1 == r3 {
            return Err(PumError::DuplicateRow { row: r1 });
        }
        if r2 == r3 {
            return Err(PumError::DuplicateRow { row: r2 });
        }
        let w = self.words_per_row;
        for i in 0..w {
            let a = self.bits[r1 * w + i];
            let b = self.bits[r2 * w + i];
            let c = self.bits[r3 * w + i];
            let maj = (a & b) | (b & c) | (a & c);
            self.bits[r1 * w + i] = maj;
            self.bits[r2 * w + i] = maj;
            self.bits[r3 * w + i] = maj;
        }
        self.log.triple_activations += 1;
        Ok(())
    }

    /// Write the complement of `src` into `dst` through the dual-contact path.
    pub fn not_row(&mut self, src: usize, dst: usize) -> Result<()> {
        self.check(src)?;
        self.check(dst)?;
        if src == dst {
            return Err(PumError::SameRow { row: src });
        }
        let role = self.role(dst);
        if !matches!(role, RowRole::Compute | RowRole::DualContact) {
            return Err(PumError::NonComputeRow { row: dst, role });
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.bits[dst * w + i] = !self.bits[src * w + i];
        }
        self.bits[(dst + 1) * w - 1] &= self.tail_mask;
        self.log.not_activations += 1;
        Ok(())
    }

    /// Row-to-row copy within the subarray.
    pub fn copy_row(&mut self, src: usize, dst: usize) -> Result<()> {
        self.check(src)?;
        self.check(dst)?;
        if src == dst {
            return Err(PumError::SameRow { row: src });
        }
        let w = self.words_per_row;
        self.bits.copy_within(src * w..(src + 1) * w, dst * w);
        self.log.copies += 1;
        Ok(())
    }

    /// Re-establish a constant row's value.
    pub fn init_constant(&mut self, row: usize, value: bool) -> Result<()> {
        self.check(row)?;
        let role = self.role(row);
        if role == RowRole::Data {
            return Err(PumError::NonComputeRow { row, role });
        }
        self.fill_row(row, value);
        self.log.constant_inits += 1;
        Ok(())
    }
}
