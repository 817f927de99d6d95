//! Vertical (bit-sliced) operand layout.
//!
//! A vector of `lanes` values of `width` bits occupies `width` rows: row `i`
//! holds bit `i` (LSB first) of every lane and column `k` is lane `k`.

use super::error::{PumError, Result};
use super::subarray::SubarrayState;

pub const SUPPORTED_WIDTHS: [u32; 4] = [8, 16, 32, 64];

pub fn check_width(width: u32) -> Result<()> {
    if SUPPORTED_WIDTHS.contains(&width) {
        Ok(())
    } else {
        Err(PumError::UnsupportedWidth(width))
    }
}

/// Bit rows of packed 64-column words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<Vec<u64>>,
    columns: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, columns: usize) -> Self {
        Self {
            rows: vec![vec![0; columns.div_ceil(64)]; rows],
            columns,
        }
    }

    /// Slice the low `width` bits of each value into rows.
    pub fn from_words(values: &[u64], width: u32) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(PumError::UnsupportedWidth(width));
        }
        let mut m = Self::zeros(width as usize, values.len());
        for (lane, &v) in values.iter().enumerate() {
            for bit in 0..width as usize {
                if (v >> bit) & 1 == 1 {
                    m.rows[bit][lane / 64] |= 1 << (lane % 64);
                }
            }
        }
        Ok(m)
    }

    pub fn to_words(&self) -> Vec<u64> {
        (0..self.columns)
            .map(|lane| {
                self.rows.iter().enumerate().fold(0u64, |acc, (bit, row)| {
                    acc | (((row[lane / 64] >> (lane % 64)) & 1) << bit)
                })
            })
            .collect()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn bit(&self, row: usize, column: usize) -> bool {
        (self.rows[row][column / 64] >> (column % 64)) & 1 == 1
    }
}

/// Convert lane values into `width` bit rows for a subarray with `columns` columns.
pub fn transpose_to_vertical(values: &[u64], width: u32, columns: usize) -> Result<BitMatrix> {
    check_width(width)?;
    if values.len() > columns {
        return Err(PumError::TooManyLanes {
            lanes: values.len(),
            columns,
        });
    }
    BitMatrix::from_words(values, width)
}

/// Inverse of [`transpose_to_vertical`]; values are zero-extended.
pub fn transpose_to_horizontal(matrix: &BitMatrix) -> Vec<u64> {
    matrix.to_words()
}

/// Host-side load of `values` into rows `base..base+width`.
pub fn load_vertical(state: &mut SubarrayState, base: usize, values: &[u64], width: u32) -> Result<()> {
    let m = transpose_to_vertical(values, width, state.columns())?;
    let words = state.words_per_row();
    for (i, row) in m.rows().iter().enumerate() {
        let mut buf = row.clone();
        buf.resize(words, 0);
        state.write_row(base + i, &buf)?;
    }
    Ok(())
}

/// Read `lanes` values of `width` bits back from rows `base..base+width`.
pub fn read_vertical(state: &SubarrayState, base: usize, lanes: usize, width: u32) -> Result<Vec<u64>> {
    check_width(width)?;
    if lanes > state.columns() {
        return Err(PumError::TooManyLanes {
            lanes,
            columns: state.columns(),
        });
    }
    let mut m = BitMatrix::zeros(width as usize, lanes);
    for i in 0..width as usize {
        let row = state.row(base + i)?;
        let n = m.rows[i].len();
        m.rows[i].copy_from_slice(&row[..n]);
        if lanes % 64 != 0 {
            m.rows[i][n - 1] &= (1u64 << (lanes % 64)) - 1;
        }
    }
    Ok(m.to_words())
}
