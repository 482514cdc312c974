use super::gf2n::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

/// Dense matrix over GF(2^n); entries stored as raw coordinate masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl FieldMatrix {
    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Self { spec, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(spec: FieldSpec, k: usize) -> Self {
        let mut m = Self::zeros(spec, k, k);
        for i in 0..k {
            m.entries[i * k + i] = 1;
        }
        m
    }

    /// Build from rows of elements; every entry must share `spec`.
    pub fn from_rows(spec: FieldSpec, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(spec, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch { expected: cols, got: row.len() });
            }
            for (c, e) in row.iter().enumerate() {
                m.set(r, c, *e)?;
            }
        }
        Ok(m)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.spec.element(self.entries[r * self.cols + c]).expect("stored entries are reduced")
    }

    pub fn get_raw(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) -> Result<()> {
        if v.spec() != self.spec {
            return Err(Error::FieldMismatch(v.spec().to_string(), self.spec.to_string()));
        }
        self.entries[r * self.cols + c] = v.value();
        Ok(())
    }

    /// Raw setter; `v` must already be a reduced mask.
    pub fn set_raw(&mut self, r: usize, c: usize, v: u64) {
        debug_assert_eq!(v & !self.spec.mask(), 0);
        self.entries[r * self.cols + c] = v;
    }

    /// Gauss-Jordan on an augmented copy; returns (reduced matrix, pivot columns).
    fn reduce(&self, width: usize, data: &mut [u64], rows: usize) -> Vec<usize> {
        let f = self.spec;
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..width {
            if next == rows {
                break;
            }
            let Some(p) = (next..rows).find(|&r| data[r * width + col] != 0) else {
                continue;
            };
            if p != next {
                for c in 0..width {
                    data.swap(p * width + c, next * width + c);
                }
            }
            let inv = f.inv_raw(data[next * width + col]).expect("pivot is nonzero");
            for c in col..width {
                data[next * width + c] = f.mul_raw(data[next * width + c], inv);
            }
            for r in 0..rows {
                let factor = data[r * width + col];
                if r == next || factor == 0 {
                    continue;
                }
                for c in col..width {
                    let t = f.mul_raw(factor, data[next * width + c]);
                    data[r * width + c] ^= t;
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut data = self.entries.clone();
        self.reduce(self.cols, &mut data, self.rows).len()
    }

    /// Some solution `x` of `self * x = v`, or `None` when inconsistent.
    pub fn solve(&self, v: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if v.len() != self.rows {
            return Err(Error::LengthMismatch { expected: self.rows, got: v.len() });
        }
        let width = self.cols + 1;
        let mut data = vec![0u64; self.rows * width];
        for r in 0..self.rows {
            data[r * width..r * width + self.cols].copy_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
            if v[r].spec() != self.spec {
                return Err(Error::FieldMismatch(v[r].spec().to_string(), self.spec.to_string()));
            }
            data[r * width + self.cols] = v[r].value();
        }
        let pivots = self.reduce(width, &mut data, self.rows);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.spec.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = self.spec.element(data[r * width + self.cols])?;
        }
        Ok(Some(x))
    }

    /// `self * x`.
    pub fn apply(&self, x: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: x.len() });
        }
        (0..self.rows)
            .map(|r| {
                let acc = (0..self.cols).fold(0u64, |acc, c| acc ^ self.spec.mul_raw(self.get_raw(r, c), x[c].value()));
                self.spec.element(acc)
            })
            .collect()
    }
}

/// Convenience wrapper matching the free-function naming used elsewhere.
pub fn field_rank(m: &FieldMatrix) -> usize {
    m.rank()
}
