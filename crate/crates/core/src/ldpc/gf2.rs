//! Dense bit matrices over GF(2) packed into `u64` words.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.rows && col < self.cols);
        (self.words[row * self.stride + col / 64] >> (col % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        debug_assert!(row < self.rows && col < self.cols);
        let w = &mut self.words[row * self.stride + col / 64];
        let mask = 1u64 << (col % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, row: usize, col: usize) {
        self.words[row * self.stride + col / 64] ^= 1u64 << (col % 64);
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.words[row * self.stride..(row + 1) * self.stride]
    }

    pub fn row_bits(&self, row: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(row, c) as u8).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `dst ^= src`
    fn xor_row_into(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (lo, hi) = self.words.split_at_mut(dst.max(src) * s);
        let (d, r) = if dst < src {
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (a, b) in d.iter_mut().zip(r) {
            *a ^= *b;
        }
    }

    /// Reduces the matrix in place to reduced row-echelon form, scanning
    /// columns left to right. Returns the pivot column of each of the first
    /// `rank` rows.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            self.swap_rows(rank, p);
            for r in 0..self.rows {
                if r != rank && self.get(r, col) {
                    self.xor_row_into(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Product `self · v` over GF(2) for a bit vector `v` of length `cols`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        let packed = pack(v);
        (0..self.rows)
            .map(|r| {
                let acc = self
                    .row_words(r)
                    .iter()
                    .zip(&packed)
                    .fold(0u64, |acc, (a, b)| acc ^ (a & b));
                (acc.count_ones() & 1) as u8
            })
            .collect()
    }
}

pub(crate) fn pack(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

pub(crate) fn unpack(words: &[u64], len: usize) -> Vec<u8> {
    (0..len)
        .map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&str]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows.len(), rows[0].len());
        for (r, s) in rows.iter().enumerate() {
            for (c, ch) in s.chars().enumerate() {
                m.set(r, c, ch == '1');
            }
        }
        m
    }

    #[test]
    fn rref_of_hamming() {
        let mut h = from_rows(&["1110100", "0111010", "1101001"]);
        let pivots = h.rref();
        assert_eq!(pivots, vec![0, 1, 2]);
        for (i, &p) in pivots.iter().enumerate() {
            for r in 0..3 {
                assert_eq!(h.get(r, p), r == i);
            }
        }
    }

    #[test]
    fn duplicated_row_loses_rank() {
        let h = from_rows(&["1100", "0110", "1100"]);
        assert_eq!(h.rank(), 2);
    }

    #[test]
    fn wide_matrix_crosses_word_boundary() {
        let mut m = BitMatrix::zeros(2, 130);
        m.set(0, 0, true);
        m.set(0, 129, true);
        m.set(1, 129, true);
        assert_eq!(m.rank(), 2);
        let mut v = vec![0u8; 130];
        v[129] = 1;
        assert_eq!(m.mul_vec(&v), vec![1, 1]);
        m.flip(1, 129);
        assert_eq!(m.mul_vec(&v), vec![1, 0]);
    }

    #[test]
    fn pack_unpack() {
        let bits: Vec<u8> = (0..150).map(|i| ((i * 7) % 3 == 0) as u8).collect();
        assert_eq!(unpack(&pack(&bits), bits.len()), bits);
    }
}
