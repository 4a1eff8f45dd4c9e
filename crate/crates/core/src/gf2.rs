//! Bit-packed vectors and matrices over GF(2).
//!
//! Coordinate `i` of a [`BitVector`] lives at bit `i % 64` of word `i / 64`.
//! Bits past the logical length are always zero.

use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: SmallVec::from_elem(0, words_for(len)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector from the low `len` bits of `word`.
    pub fn from_word(len: usize, word: u64) -> Self {
        assert!(len <= WORD, "from_word needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = word & low_mask(len);
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, first character = coordinate 0.
    pub fn parse01(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
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

    /// The first word; the whole vector when `len <= 64`.
    #[inline]
    pub fn word0(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "coordinate {i} out of range for length {}", self.len);
        let m = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch");
        let mut r = self.clone();
        for (a, b) in r.words.iter_mut().zip(other.words.iter()) {
            *a &= *b;
        }
        r
    }

    /// Standard inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        popcount_and(self, other) & 1 == 1
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn to_01(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self.to_01())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_01())
    }
}

/// `|supp(v) ∩ supp(w)|`. Panics on a length mismatch.
pub fn popcount_and(v: &BitVector, w: &BitVector) -> usize {
    assert_eq!(v.len, w.len, "popcount_and: length mismatch");
    v.words
        .iter()
        .zip(w.words.iter())
        .map(|(a, b)| (a & b).count_ones() as usize)
        .sum()
}

#[inline]
pub(crate) fn low_mask(len: usize) -> u64 {
    if len >= WORD {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`GF2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: GF2Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GF2Matrix {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length does not match column count");
        }
        GF2Matrix { cols, rows }
    }

    /// Rows given as the low `cols` bits of each word (`cols <= 64`).
    pub fn from_words(cols: usize, words: &[u64]) -> Self {
        GF2Matrix {
            cols,
            rows: words.iter().map(|&w| BitVector::from_word(cols, w)).collect(),
        }
    }

    /// Parses rows of `0`/`1` strings. All rows must have equal length.
    pub fn parse01(cols: usize, lines: &[&str]) -> Option<Self> {
        let mut rows = Vec::with_capacity(lines.len());
        for l in lines {
            let v = BitVector::parse01(l)?;
            if v.len() != cols {
                return None;
            }
            rows.push(v);
        }
        Some(GF2Matrix { cols, rows })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    pub fn push_row(&mut self, v: BitVector) {
        assert_eq!(v.len(), self.cols);
        self.rows.push(v);
    }

    /// Reduced row echelon form. Pivots are found scanning columns left to
    /// right and, within a column, rows top to bottom. Zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Rref {
            matrix: GF2Matrix {
                cols: self.cols,
                rows,
            },
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : M vᵀ = 0}`, returned in RREF.
    pub fn kernel(&self) -> GF2Matrix {
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (row, &p) in matrix.rows.iter().zip(pivots.iter()) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        GF2Matrix {
            cols: self.cols,
            rows: basis,
        }
        .rref()
        .matrix
    }

    /// `M · vᵀ` as a vector of length `nrows`.
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut t = GF2Matrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in 0..self.cols {
                if r.get(j) {
                    t.rows[j].set(i, true);
                }
            }
        }
        t
    }

    /// Rows as single words; requires `cols <= 64`.
    pub fn to_words(&self) -> Vec<u64> {
        assert!(self.cols <= WORD);
        self.rows.iter().map(|r| r.word0()).collect()
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {}", r)?;
        }
        Ok(())
    }
}

// Single-word fast paths used by the code layer, where lengths never exceed 64.

/// In-place RREF on single-word rows; zero rows are removed. Returns pivots.
pub(crate) fn rref_words(rows: &mut Vec<u64>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let bit = 1u64 << c;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pr;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Kernel basis (RREF) of single-word rows of width `cols`.
pub(crate) fn kernel_words(rows: &[u64], cols: usize) -> Vec<u64> {
    let mut m = rows.to_vec();
    let pivots = rref_words(&mut m, cols);
    let mut pivot_mask = 0u64;
    for &p in &pivots {
        pivot_mask |= 1 << p;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| pivot_mask >> c & 1 == 0) {
        let mut v = 1u64 << free;
        for (row, &p) in m.iter().zip(pivots.iter()) {
            if row >> free & 1 == 1 {
                v |= 1 << p;
            }
        }
        basis.push(v);
    }
    rref_words(&mut basis, cols);
    basis
}

/// Clears the pivot bits of `v` against an RREF basis, giving the canonical
/// representative of `v` modulo the span.
#[inline]
pub(crate) fn reduce_word(mut v: u64, rows: &[u64], pivots: &[usize]) -> u64 {
    for (r, &p) in rows.iter().zip(pivots.iter()) {
        if v >> p & 1 == 1 {
            v ^= r;
        }
    }
    v
}

/// Solves `v = Σ_i c_i basis[i]` for linearly independent `basis`, returning
/// the coefficient mask, or `None` when `v` is outside the span.
#[derive(Clone, Debug)]
pub(crate) struct Coordinatizer {
    /// Echelon rows paired with the combination of input rows producing them.
    rows: Vec<(u64, u64)>,
    pivots: Vec<usize>,
}

impl Coordinatizer {
    pub(crate) fn new(basis: &[u64]) -> Self {
        assert!(basis.len() <= 64);
        let mut rows: Vec<(u64, u64)> = Vec::new();
        let mut pivots = Vec::new();
        for (i, &b) in basis.iter().enumerate() {
            let mut v = b;
            let mut combo = 1u64 << i;
            for (&(r, c), &p) in rows.iter().zip(pivots.iter()) {
                if v >> p & 1 == 1 {
                    v ^= r;
                    combo ^= c;
                }
            }
            assert!(v != 0, "Coordinatizer basis is linearly dependent");
            pivots.push(v.trailing_zeros() as usize);
            rows.push((v, combo));
        }
        Coordinatizer { rows, pivots }
    }

    pub(crate) fn solve(&self, mut v: u64) -> Option<u64> {
        let mut combo = 0u64;
        for (&(r, c), &p) in self.rows.iter().zip(self.pivots.iter()) {
            if v >> p & 1 == 1 {
                v ^= r;
                combo ^= c;
            }
        }
        (v == 0).then_some(combo)
    }
}
