use std::fmt;

/// Dense matrix over F2, row-major, 64 columns per word.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        Self { rows, cols, stride, bits: vec![0; rows * stride] }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Build from sparse rows given as lists of set column indices.
    /// Repeated indices cancel.
    pub fn from_sparse_rows<R: AsRef<[usize]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for &c in row.as_ref() {
                m.flip(r, c);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Bytes of packed storage.
    pub fn storage_bytes(&self) -> usize {
        self.bits.len() * 8
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / 64];
        let b = 1u64 << (c % 64);
        if v {
            *w |= b;
        } else {
            *w &= !b;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// Set columns of row `r`, ascending.
    /// Overwrite row `r` with packed words; bits past `cols` must be zero.
    pub fn set_row_words(&mut self, r: usize, words: &[u64]) {
        assert_eq!(words.len(), self.stride);
        self.bits[r * self.stride..(r + 1) * self.stride].copy_from_slice(words);
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.row_words(r).iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(w * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.bits.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`, touching words from `from_word` on.
    #[inline]
    fn xor_row(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        let (d, sr) = if dst < src {
            let (head, tail) = self.bits.split_at_mut(src * s);
            (&mut head[dst * s..(dst + 1) * s], &tail[..s])
        } else {
            let (head, tail) = self.bits.split_at_mut(dst * s);
            (&mut tail[..s], &head[src * s..(src + 1) * s])
        };
        for (x, y) in d[from_word..].iter_mut().zip(&sr[from_word..]) {
            *x ^= *y;
        }
    }

    /// Rank over F2 by Gaussian elimination on a private copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.forward_eliminate().len()
    }

    /// Row echelon form in place (pivot rows first); returns pivot columns.
    fn forward_eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == self.rows {
                break;
            }
            let w = col / 64;
            let b = 1u64 << (col % 64);
            let Some(p) = (next..self.rows).find(|&r| self.bits[r * self.stride + w] & b != 0) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in next + 1..self.rows {
                if self.bits[r * self.stride + w] & b != 0 {
                    self.xor_row(r, next, w);
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    /// Reduced row echelon form in place. Rows `0..rank` hold the reduced
    /// basis with strictly increasing pivot columns, the rest are zero.
    /// Returns the pivot column of each basis row.
    pub fn echelonize(&mut self) -> Vec<usize> {
        let pivots = self.forward_eliminate();
        for (i, &col) in pivots.iter().enumerate().rev() {
            let w = col / 64;
            let b = 1u64 << (col % 64);
            for r in 0..i {
                if self.bits[r * self.stride + w] & b != 0 {
                    self.xor_row(r, i, w);
                }
            }
        }
        pivots
    }

    /// Keep only the first `rows` rows.
    pub fn truncate_rows(&mut self, rows: usize) {
        if rows < self.rows {
            self.rows = rows;
            self.bits.truncate(rows * self.stride);
        }
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(96)).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}
