//! Dense bit-packed matrices over GF(2).

/// Row-major binary matrix, each row packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Self {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 bytes.
    pub fn from_rows<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols);
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let w = self.words;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&mut lo[dst * w..(dst + 1) * w], &hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&mut hi[..w], &lo[src * w..(src + 1) * w])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Appends a row given as 0/1 bytes.
    pub fn push_row(&mut self, row: &[u8]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(std::iter::repeat_n(0, self.words));
        self.rows += 1;
        let r = self.rows - 1;
        for (c, &b) in row.iter().enumerate() {
            if b & 1 == 1 {
                self.set(r, c, true);
            }
        }
    }

    /// `M · v^T` for a 0/1 vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        let packed = pack(v);
        (0..self.rows)
            .map(|r| {
                let parity = self
                    .row_words(r)
                    .iter()
                    .zip(&packed)
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
                (parity & 1) as u8
            })
            .collect()
    }

    /// `v · M` for a 0/1 vector `v` of length `rows`.
    pub fn left_mul(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.rows);
        let mut acc = vec![0u64; self.words];
        for (r, &b) in v.iter().enumerate() {
            if b & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= *w;
                }
            }
        }
        unpack(&acc, self.cols)
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// leading row. Rows past `pivots.len()` are zero afterwards.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(row, p);
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_row(r, row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                if self.get(r, c) {
                    aug.set(r, c, true);
                }
            }
            aug.set(r, n + r, true);
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = BitMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                if aug.get(r, n + c) {
                    inv.set(r, c, true);
                }
            }
        }
        Some(inv)
    }
}

pub(crate) fn pack(v: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; v.len().div_ceil(64)];
    for (i, &b) in v.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

pub(crate) fn unpack(words: &[u64], len: usize) -> Vec<u8> {
    (0..len).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_rows(3, &[[1u8, 1, 0], [0, 1, 1], [0, 0, 1]]);
        let inv = m.inverse().unwrap();
        for v in 0..8u8 {
            let x = [v & 1, (v >> 1) & 1, (v >> 2) & 1];
            assert_eq!(inv.left_mul(&m.left_mul(&x)), x.to_vec());
        }
        let singular = BitMatrix::from_rows(2, &[[1u8, 1], [1, 1]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn rank_and_rref() {
        let m = BitMatrix::from_rows(4, &[[1u8, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let mut r = m.clone();
        assert_eq!(r.rref(), vec![0, 1]);
        assert_eq!(r.row_bits(2), vec![0, 0, 0, 0]);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 129, true);
        m.set(1, 64, true);
        m.set(1, 129, true);
        m.xor_row(1, 0);
        assert!(!m.get(1, 129));
        assert!(m.get(1, 64));
        let v: Vec<u8> = (0..130).map(|i| (i == 64) as u8).collect();
        assert_eq!(m.mul_vec(&v), vec![0, 1]);
    }
}
