//! Bit-packed GF(2) matrices and an incremental rank engine.
//!
//! Rows are stored as little-endian `u64` words: column `j` of a row lives in
//! bit `j % 64` of word `j / 64`. Bits past `cols` are always zero.

use std::io::{self, Read, Write};

use rayon::prelude::*;
use thiserror::Error;

pub const WORD_BITS: usize = 64;
/// File magic for the dense export format (8 bytes, followed by rows and cols as `u32` LE).
pub const MAGIC: &[u8; 8] = b"GF2BMAT\0";

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
pub fn get_bit(row: &[u64], j: usize) -> bool {
    row[j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
}

#[inline]
pub fn set_bit(row: &mut [u64], j: usize) {
    row[j / WORD_BITS] |= 1 << (j % WORD_BITS);
}

#[inline]
pub fn flip_bit(row: &mut [u64], j: usize) {
    row[j / WORD_BITS] ^= 1 << (j % WORD_BITS);
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Position of the lowest set bit at or after word `from`.
#[inline]
fn first_set(row: &[u64], from: usize) -> Option<usize> {
    row[from..].iter().position(|&w| w != 0).map(|i| (from + i) * WORD_BITS + row[from + i].trailing_zeros() as usize)
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("bad matrix file magic")]
    BadMagic,
    #[error("matrix data truncated")]
    Truncated,
    #[error("pad bits past column {cols} are set in row {row}")]
    DirtyPadding { row: usize, cols: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Row-major packed binary matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from boolean rows; every row must have length `cols`.
    pub fn from_bool_rows(rows: &[Vec<bool>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &b) in r.iter().enumerate() {
                if b {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// The matrix of a GF(2)-linear map given by the images of the basis
    /// vectors: column `j` holds the `rows` low bits of `images[j]`.
    pub fn from_columns(images: &[u64], rows: usize) -> Self {
        let mut m = Self::zeros(rows, images.len());
        for (j, &img) in images.iter().enumerate() {
            for i in 0..rows {
                if img >> i & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(self.row(i), j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.row_mut(i)[j / WORD_BITS];
        let bit = 1u64 << (j % WORD_BITS);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        if src == dst {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        xor_into(b, a);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// Row-reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(p, r);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// GF(2) rank, computed by feeding the rows through [`RankEngine`].
    pub fn rank(&self) -> usize {
        let mut eng = RankEngine::new(self.cols);
        for i in 0..self.rows {
            eng.insert(self.row(i).to_vec());
        }
        eng.rank()
    }

    /// Basis of the right kernel `{x : M x = 0}`, each vector packed like a row
    /// of length `cols`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.stride];
                set_bit(&mut v, free);
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, free) {
                        set_bit(&mut v, p);
                    }
                }
                v
            })
            .collect()
    }

    pub fn has_clean_padding(&self) -> bool {
        let tail = self.cols % WORD_BITS;
        tail == 0 || (0..self.rows).all(|i| self.row(i)[self.stride - 1] >> tail == 0)
    }

    /// Dense export: 16-byte header (magic, rows, cols as `u32` LE) followed by
    /// each row's words as `u64` LE.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.rows as u32).to_le_bytes())?;
        w.write_all(&(self.cols as u32).to_le_bytes())?;
        for word in &self.data {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, MatrixError> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header).map_err(|_| MatrixError::Truncated)?;
        if &header[..8] != MAGIC {
            return Err(MatrixError::BadMagic);
        }
        let rows = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
        let cols = u32::from_le_bytes(header[12..16].try_into().unwrap()) as usize;
        let mut m = Self::zeros(rows, cols);
        let mut buf = [0u8; 8];
        for word in m.data.iter_mut() {
            r.read_exact(&mut buf).map_err(|_| MatrixError::Truncated)?;
            *word = u64::from_le_bytes(buf);
        }
        if let Some(row) = (0..rows).find(|&i| {
            let tail = cols % WORD_BITS;
            tail != 0 && m.row(i)[m.stride - 1] >> tail != 0
        }) {
            return Err(MatrixError::DirtyPadding { row, cols });
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pivot storage would exceed the memory cap of {cap} bytes (rank so far: {partial_rank})")]
pub struct CapExceeded {
    pub cap: usize,
    pub partial_rank: usize,
}

/// Streaming GF(2) rank: rows are reduced against stored pivot rows and kept
/// only if they are independent. Memory is `rank * row_bytes`.
#[derive(Clone, Debug)]
pub struct RankEngine {
    cols: usize,
    stride: usize,
    pivots: Vec<Vec<u64>>,
    /// `lead[c]` is the index of the pivot whose lowest set bit is column `c`.
    lead: Vec<u32>,
    memory_cap: Option<usize>,
}

const NO_PIVOT: u32 = u32::MAX;

impl RankEngine {
    pub fn new(cols: usize) -> Self {
        RankEngine { cols, stride: words_for(cols), pivots: Vec::new(), lead: vec![NO_PIVOT; cols], memory_cap: None }
    }

    pub fn with_memory_cap(mut self, cap: Option<usize>) -> Self {
        self.memory_cap = cap;
        self
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn pivots(&self) -> &[Vec<u64>] {
        &self.pivots
    }

    /// Reduces `row` against the first `upto` pivots; returns the lead column
    /// of the remainder, or `None` if it reduced to zero.
    fn reduce_prefix(&self, row: &mut [u64], upto: usize) -> Option<usize> {
        let mut w = 0;
        while let Some(c) = first_set(row, w) {
            let p = self.lead[c];
            if p == NO_PIVOT || p as usize >= upto {
                return Some(c);
            }
            w = c / WORD_BITS;
            xor_into(&mut row[w..], &self.pivots[p as usize][w..]);
        }
        None
    }

    /// Reduces `row` against all pivots.
    pub fn reduce(&self, row: &mut [u64]) -> Option<usize> {
        self.reduce_prefix(row, self.pivots.len())
    }

    pub fn is_independent(&self, row: &[u64]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r).is_some()
    }

    fn push_pivot(&mut self, row: Vec<u64>, lead: usize) -> Result<(), CapExceeded> {
        if let Some(cap) = self.memory_cap {
            if (self.pivots.len() + 1) * self.stride * 8 > cap {
                return Err(CapExceeded { cap, partial_rank: self.pivots.len() });
            }
        }
        self.lead[lead] = self.pivots.len() as u32;
        self.pivots.push(row);
        Ok(())
    }

    /// Adds one row; returns whether it increased the rank.
    pub fn insert(&mut self, row: Vec<u64>) -> bool {
        self.try_insert(row).expect("no memory cap configured")
    }

    pub fn try_insert(&mut self, mut row: Vec<u64>) -> Result<bool, CapExceeded> {
        debug_assert_eq!(row.len(), self.stride);
        match self.reduce(&mut row) {
            Some(lead) => self.push_pivot(row, lead).map(|_| true),
            None => Ok(false),
        }
    }

    /// Inserts a batch: every row is first reduced against the frozen pivot
    /// set in parallel, then finished and inserted one at a time in batch
    /// order. The resulting rank equals sequential insertion.
    pub fn try_insert_batch(&mut self, mut rows: Vec<Vec<u64>>) -> Result<Vec<usize>, CapExceeded> {
        let frozen = self.pivots.len();
        let this = &*self;
        rows.par_iter_mut().for_each(|r| {
            this.reduce_prefix(r, frozen);
        });
        let mut added = Vec::new();
        for (i, mut r) in rows.into_iter().enumerate() {
            if let Some(lead) = self.reduce(&mut r) {
                self.push_pivot(r, lead)?;
                added.push(i);
            }
        }
        Ok(added)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Textbook elimination on unpacked booleans.
    fn dense_rank(mut m: Vec<Vec<bool>>) -> usize {
        let cols = m.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&i| m[i][c]) {
                m.swap(rank, p);
                let pivot = m[rank].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != rank && row[c] {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= *y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn random_bool_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Vec<Vec<bool>> {
        (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect()).collect()
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(BitMatrix::identity(77).rank(), 77);
        assert_eq!(BitMatrix::zeros(30, 100).rank(), 0);
    }

    #[test]
    fn random_1000_square_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        // Low-rank product so the answer is not trivially full rank.
        let a = random_bool_rows(&mut rng, 1000, 700, 0.5);
        let b = random_bool_rows(&mut rng, 700, 1000, 0.5);
        let mut prod = vec![vec![false; 1000]; 1000];
        for i in 0..1000 {
            for k in 0..700 {
                if a[i][k] {
                    for j in 0..1000 {
                        prod[i][j] ^= b[k][j];
                    }
                }
            }
        }
        let m = BitMatrix::from_bool_rows(&prod, 1000);
        let expected = dense_rank(prod);
        assert_eq!(m.rank(), expected);
        let full = random_bool_rows(&mut rng, 1000, 1000, 0.5);
        assert_eq!(BitMatrix::from_bool_rows(&full, 1000).rank(), dense_rank(full));
    }

    #[test]
    fn kernel_dimension_and_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(1..40);
            let cols = rng.gen_range(1..90);
            let bools = random_bool_rows(&mut rng, rows, cols, 0.3);
            let m = BitMatrix::from_bool_rows(&bools, cols);
            let ker = m.kernel_basis();
            assert_eq!(ker.len(), cols - m.rank());
            for v in &ker {
                for i in 0..rows {
                    let dot = m.row(i).iter().zip(v).map(|(a, b)| (a & b).count_ones()).sum::<u32>();
                    assert_eq!(dot % 2, 0);
                }
            }
            let mut eng = RankEngine::new(cols);
            for v in &ker {
                assert!(eng.insert(v.clone()));
            }
        }
    }

    #[test]
    fn batch_insert_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bools = random_bool_rows(&mut rng, 300, 200, 0.05);
        let m = BitMatrix::from_bool_rows(&bools, 200);
        let rows: Vec<_> = (0..300).map(|i| m.row(i).to_vec()).collect();
        let mut seq = RankEngine::new(200);
        for r in rows.clone() {
            seq.insert(r);
        }
        let mut bat = RankEngine::new(200);
        for chunk in rows.chunks(37) {
            bat.try_insert_batch(chunk.to_vec()).unwrap();
        }
        assert_eq!(seq.rank(), bat.rank());
        assert_eq!(seq.rank(), dense_rank(bools));
    }

    #[test]
    fn memory_cap_reports_partial_rank() {
        let mut eng = RankEngine::new(128).with_memory_cap(Some(3 * 16));
        for i in 0..3 {
            let mut r = vec![0u64; 2];
            set_bit(&mut r, i);
            assert!(eng.try_insert(r).unwrap());
        }
        let mut r = vec![0u64; 2];
        set_bit(&mut r, 100);
        assert_eq!(eng.try_insert(r), Err(CapExceeded { cap: 48, partial_rank: 3 }));
    }

    #[test]
    fn export_import() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bools = random_bool_rows(&mut rng, 13, 70, 0.5);
        let m = BitMatrix::from_bool_rows(&bools, 70);
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 13 * 2 * 8);
        assert_eq!(BitMatrix::read_from(&buf[..]).unwrap(), m);
        buf[0] = b'X';
        assert!(matches!(BitMatrix::read_from(&buf[..]), Err(MatrixError::BadMagic)));
    }

    proptest::proptest! {
        #[test]
        fn rank_invariant_under_row_operations(seed in 0u64..10_000, ops in proptest::collection::vec((0usize..24, 0usize..24), 0..40)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let bools = random_bool_rows(&mut rng, 24, 90, 0.2);
            let mut m = BitMatrix::from_bool_rows(&bools, 90);
            let r0 = m.rank();
            for (a, b) in ops {
                if a == b {
                    continue;
                }
                if (a + b) % 2 == 0 { m.swap_rows(a, b) } else { m.xor_row_into(a, b) }
            }
            proptest::prop_assert_eq!(m.rank(), r0);
            proptest::prop_assert!(m.has_clean_padding());
        }
    }
}
