//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as little-endian `u64` words: bit `i` of a row lives in
//! word `i / 64` at position `i % 64`. Padding bits past the logical length
//! are kept at zero by every operation, so word-level equality and popcounts
//! are exact.
//!
//! Elimination always pivots on the lowest available column and zeroes free
//! variables, which makes [`BitMatrix::solve`] deterministic.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at `indices`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// `self ^= other`.
    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Bits `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        let mut out = BitVec::zeros(len);
        for i in self.iter_ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        write!(f, "]")
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks `rows` (each of length `cols`) into a matrix.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {r} has the wrong length");
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        m
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let vecs: Vec<BitVec> = rows.iter().map(|r| BitVec::from_bools(r)).collect();
        Self::from_rows(cols, &vecs)
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
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let idx = r * self.stride + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            if parity.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * self.stride);
        head[lo * self.stride..(lo + 1) * self.stride].swap_with_slice(&mut tail[..self.stride]);
    }

    /// `row[dst] ^= row[src]` on words `from_word..`.
    #[inline]
    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * s);
            let src_row = &head[src * s + from_word..(src + 1) * s];
            for (d, x) in tail[from_word..s].iter_mut().zip(src_row) {
                *d ^= x;
            }
        } else {
            let (head, tail) = self.data.split_at_mut(src * s);
            let src_row = &tail[from_word..s];
            for (d, x) in head[dst * s + from_word..(dst + 1) * s].iter_mut().zip(src_row) {
                *d ^= x;
            }
        }
    }

    /// In-place Gaussian elimination with lowest-column-first pivoting.
    ///
    /// With `full` set the result is in reduced row echelon form. `rhs`, if
    /// given, receives the same row operations. Returns the pivot columns.
    fn eliminate(&mut self, mut rhs: Option<&mut BitVec>, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let w = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0) else {
                continue;
            };
            self.swap_rows(p, rank);
            if let Some(b) = rhs.as_deref_mut() {
                let (bp, br) = (b.get(p), b.get(rank));
                b.set(p, br);
                b.set(rank, bp);
            }
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.data[r * self.stride + w] & mask != 0 {
                    self.xor_row_into(rank, r, w);
                    if let Some(b) = rhs.as_deref_mut() {
                        if b.get(rank) {
                            b.flip(r);
                        }
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        pivots
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        self.clone().eliminate(None, false).len()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(None, true);
        (m, pivots)
    }

    /// Solves `self · x = b`. Free variables are set to zero, so the answer
    /// is a deterministic function of `(self, b)`. Returns `None` when the
    /// system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows, "right-hand side length must equal row count");
        let mut m = self.clone();
        let mut rhs = b.clone();
        let pivots = m.eliminate(Some(&mut rhs), true);
        if (pivots.len()..self.rows).any(|r| rhs.get(r)) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            if rhs.get(r) {
                x.set(c, true);
            }
        }
        Some(x)
    }

    /// Restriction to the listed columns, in the listed order.
    pub fn column_submatrix(&self, cols: &[usize]) -> Result<BitMatrix> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::ColumnOutOfRange {
                index: bad,
                cols: self.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            let row = self.row_words(r);
            let dst = r * out.stride;
            for (j, &c) in cols.iter().enumerate() {
                if (row[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1 {
                    out.data[dst + j / WORD_BITS] |= 1u64 << (j % WORD_BITS);
                }
            }
        }
        Ok(out)
    }

    /// A basis of `{x : self · x = 0}`; it has `cols - rank` elements.
    pub fn nullspace_basis(&self) -> Vec<BitVec> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::zeros(self.cols);
                v.set(free, true);
                for (r, &p) in pivots.iter().enumerate() {
                    if m.get(r, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Incrementally built basis of a row space, for repeated membership tests.
///
/// Every stored row is keyed by its lowest set bit. XOR-ing a row into a
/// vector only touches bits at or above that key, so one ascending pass
/// clears every pivot position and yields a canonical representative.
#[derive(Clone, Debug)]
pub struct RowSpace {
    len: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<u32>,
    pivot_mask: Vec<u64>,
}

const NO_PIVOT: u32 = u32::MAX;

impl RowSpace {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivot_row: vec![NO_PIVOT; len],
            pivot_mask: vec![0; words_for(len)],
        }
    }

    pub fn from_rows<'a, I: IntoIterator<Item = &'a BitVec>>(len: usize, rows: I) -> Self {
        let mut space = Self::new(len);
        for row in rows {
            space.insert(row.clone());
        }
        space
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.rows
    }

    /// Canonical representative of `v` modulo the space.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        assert_eq!(v.len(), self.len, "length mismatch in reduce");
        for wi in 0..self.pivot_mask.len() {
            loop {
                let hits = v.words[wi] & self.pivot_mask[wi];
                if hits == 0 {
                    break;
                }
                let bit = wi * WORD_BITS + hits.trailing_zeros() as usize;
                v.xor_assign(&self.rows[self.pivot_row[bit] as usize]);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Adds `v`; returns `true` if it enlarged the space.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            None => false,
            Some(p) => {
                self.pivot_row[p] = self.rows.len() as u32;
                self.pivot_mask[p / WORD_BITS] |= 1u64 << (p % WORD_BITS);
                self.rows.push(r);
                true
            }
        }
    }
}
