//! Binary matrices over GF(2): a row-list sparse form for lifted codes and a
//! bit-packed dense form for elimination.

use crate::matrix::IntMatrix;
use serde::{Deserialize, Serialize};

/// Sparse binary matrix stored as sorted column lists per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SparseBinMatrix {
    ncols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparseBinMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Toggles entry `(r, c)`. Returns the new value.
    pub fn toggle(&mut self, r: usize, c: usize) -> bool {
        assert!(c < self.ncols, "column {c} out of bounds");
        let row = &mut self.rows[r];
        match row.binary_search(&c) {
            Ok(i) => {
                row.remove(i);
                false
            }
            Err(i) => {
                row.insert(i, c);
                true
            }
        }
    }

    /// Sets `(r, c)` to one; returns `false` if it was already one.
    pub fn insert(&mut self, r: usize, c: usize) -> bool {
        assert!(c < self.ncols, "column {c} out of bounds");
        let row = &mut self.rows[r];
        match row.binary_search(&c) {
            Ok(_) => false,
            Err(i) => {
                row.insert(i, c);
                true
            }
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].binary_search(&c).is_ok()
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.ncols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    /// Column lists (row indices per column), sorted.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    /// Syndrome `H x^T` over GF(2).
    pub fn syndrome(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.ncols);
        self.rows
            .iter()
            .map(|row| row.iter().filter(|&&c| x[c]).count() % 2 == 1)
            .collect()
    }

    pub fn is_codeword(&self, x: &[bool]) -> bool {
        self.syndrome(x).iter().all(|&s| !s)
    }

    /// Interprets a 0/1 integer matrix; `None` if any entry exceeds one.
    pub fn from_int(m: &IntMatrix) -> Option<Self> {
        if m.max_entry() > 1 {
            return None;
        }
        let mut out = Self::new(m.rows(), m.cols());
        for (r, c, _) in m.iter_nonzero() {
            out.rows[r].push(c);
        }
        Some(out)
    }

    pub fn to_int(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.nrows(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                m.set(r, c, 1);
            }
        }
        m
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut d = BitMatrix::zeros(self.nrows(), self.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                d.set(r, c, true);
            }
        }
        d
    }
}

/// Dense bit-packed binary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    nrows: usize,
    ncols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        let words = ncols.div_ceil(64).max(1);
        Self {
            nrows,
            ncols,
            words,
            bits: vec![0; nrows * words],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.bits[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            let v = self.bits[s + k];
            self.bits[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.words {
                self.bits.swap(a * self.words + k, b * self.words + k);
            }
        }
    }

    /// Reduces to reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.nrows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space `{x : M x^T = 0}`.
    pub fn null_space(&self) -> Vec<Vec<bool>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols)
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut x = vec![false; self.ncols];
                x[free] = true;
                for (row, &p) in pivots.iter().enumerate() {
                    if m.get(row, free) {
                        x[p] = true;
                    }
                }
                x
            })
            .collect()
    }
}
