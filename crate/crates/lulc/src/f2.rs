//! Exact linear algebra over F₂: bit-packed vectors, matrices, span
//! enumeration, kernels and linear solving.
//!
//! Positions are 0-based throughout the API; external formats (files,
//! reports) render them 1-based.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Span enumeration bound: subspaces of dimension above this are refused.
pub const MAX_SPAN_DIM: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum F2Error {
    #[error("basis rows are linearly dependent over F2 ({rows} rows, rank {rank})")]
    DependentBasis { rows: usize, rank: usize },
    #[error("span enumeration supports dimension at most {max}, got {dim}")]
    SpanTooLarge { dim: usize, max: usize },
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    AmbientMismatch { expected: usize, got: usize },
    #[error("invalid bit character {0:?}, expected '0' or '1'")]
    BadBitChar(char),
}

/// A vector over F₂, packed 64 bits per word. Bits past `len` are kept
/// zero so that equality, hashing and ordering work on the words directly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; len.div_ceil(64)] }
    }

    /// Vector with a single 1 at `bit`.
    #[must_use]
    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch: {} vs {}", self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[must_use]
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Parity of the coordinatewise AND, the F₂ inner product ⟨u,v⟩.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch: {} vs {}", self.len, other.len);
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc & 1 == 1
    }

    #[must_use]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    #[must_use]
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = F2Error;

    fn from_str(s: &str) -> Result<Self, F2Error> {
        let mut v = BitVec::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(F2Error::BadBitChar(other)),
            }
        }
        Ok(v)
    }
}

/// A dense rectangular matrix over F₂, stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BitVec::zeros(cols); rows] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let cols = rows.first().map_or(0, BitVec::len);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged rows in BitMatrix");
        }
        Self { rows: rows.len(), cols, data: rows }
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.data[j].set(i, true);
            }
        }
        t
    }

    /// Matrix-vector product over F₂ (length = row count).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            out.set(i, self.data[i].dot(v));
        }
        out
    }

    /// Row echelon reduction in place; returns the pivot column of each
    /// pivot row (rows are permuted so pivot rows come first).
    fn reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.rows).find(|&r| self.data[r].get(col)) else {
                continue;
            };
            self.data.swap(row, pr);
            let pivot_row = self.data[row].clone();
            for (r, other) in self.data.iter_mut().enumerate() {
                if r != row && other.get(col) {
                    other.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.clone().reduce().len()
    }

    /// Basis of the right kernel {y : M·y = 0}; dimension cols − rank.
    #[must_use]
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        let pivots = m.reduce();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut y = BitVec::unit(self.cols, free);
            for (prow, &pcol) in pivots.iter().enumerate() {
                if m.data[prow].get(free) {
                    y.set(pcol, true);
                }
            }
            basis.push(y);
        }
        Subspace { ambient: self.cols, basis }
    }
}

/// Solve `a·x = b` over F₂. Returns a particular solution together with a
/// basis of the kernel of `a`, or `None` when the system is inconsistent.
pub fn solve_f2(a: &BitMatrix, b: &BitVec) -> Option<(BitVec, Subspace)> {
    assert_eq!(a.rows(), b.len(), "rhs length {} != rows {}", b.len(), a.rows());
    // Row-reduce the augmented matrix [a | b].
    let mut aug = BitMatrix::zeros(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in a.data[i].ones() {
            aug.data[i].set(j, true);
        }
        if b.get(i) {
            aug.data[i].set(a.cols(), true);
        }
    }
    let pivots = aug.reduce();
    if pivots.last() == Some(&a.cols()) {
        return None; // a zero row of `a` demands 1
    }
    let mut x = BitVec::zeros(a.cols());
    for (prow, &pcol) in pivots.iter().enumerate() {
        if aug.data[prow].get(a.cols()) {
            x.set(pcol, true);
        }
    }
    Some((x, a.kernel()))
}

/// A linear subspace of F₂ⁿ given by an independent basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
}

impl Subspace {
    /// Build from independent basis rows; rejects dependent rows.
    pub fn new(ambient: usize, basis: Vec<BitVec>) -> Result<Self, F2Error> {
        for row in &basis {
            if row.len() != ambient {
                return Err(F2Error::AmbientMismatch { expected: ambient, got: row.len() });
            }
        }
        let rank = BitMatrix::from_rows(basis.clone()).rank();
        if rank != basis.len() {
            return Err(F2Error::DependentBasis { rows: basis.len(), rank });
        }
        Ok(Self { ambient, basis })
    }

    /// Build from an arbitrary spanning set, reducing to an independent basis.
    #[must_use]
    pub fn from_spanning(ambient: usize, rows: Vec<BitVec>) -> Self {
        let mut m = BitMatrix::from_rows(rows);
        let pivots = m.reduce();
        let basis = m.data.into_iter().take(pivots.len()).collect();
        Self { ambient, basis }
    }

    #[must_use]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    #[must_use]
    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// The d×n matrix whose rows are the basis vectors.
    #[must_use]
    pub fn basis_matrix(&self) -> BitMatrix {
        BitMatrix::from_rows(self.basis.clone())
    }

    pub fn contains(&self, x: &BitVec) -> bool {
        if x.len() != self.ambient {
            return false;
        }
        // x in span(basis) iff appending x does not raise the rank.
        let mut rows = self.basis.clone();
        rows.push(x.clone());
        BitMatrix::from_rows(rows).rank() == self.basis.len()
    }

    /// Enumerate all 2^d span elements as (h, x^h) with x^h = Σ h_k ξ^k.
    ///
    /// h runs over 0..2^d in increasing integer order, basis row 0 being the
    /// least significant bit of h.
    pub fn span(&self) -> Result<SpanIter<'_>, F2Error> {
        let d = self.dim();
        if d > MAX_SPAN_DIM {
            return Err(F2Error::SpanTooLarge { dim: d, max: MAX_SPAN_DIM });
        }
        Ok(SpanIter {
            basis: &self.basis,
            next_h: 0,
            size: 1u64 << d,
            cur: BitVec::zeros(self.ambient),
        })
    }
}

/// Iterator over span elements in increasing-h order; each step XORs the
/// basis rows of the bits that flip in the binary counter.
pub struct SpanIter<'a> {
    basis: &'a [BitVec],
    next_h: u64,
    size: u64,
    cur: BitVec,
}

impl Iterator for SpanIter<'_> {
    type Item = (u64, BitVec);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_h == self.size {
            return None;
        }
        let h = self.next_h;
        let out = self.cur.clone();
        self.next_h += 1;
        if self.next_h < self.size {
            let mut flips = h ^ self.next_h;
            while flips != 0 {
                let k = flips.trailing_zeros() as usize;
                self.cur.xor_assign(&self.basis[k]);
                flips &= flips - 1;
            }
        }
        Some((h, out))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rem = (self.size - self.next_h) as usize;
        (rem, Some(rem))
    }
}

impl ExactSizeIterator for SpanIter<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(bv("101").dot(&bv("110")));
        assert!(!bv("000").dot(&bv("111")));
        assert!(!bv("11").dot(&bv("11"))); // popcount 2 mod 2
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn dot_length_mismatch_panics() {
        let _ = bv("101").dot(&bv("10"));
    }

    #[test]
    fn span_full_space() {
        let s = Subspace::new(2, vec![bv("10"), bv("01")]).unwrap();
        let pts: Vec<_> = s.span().unwrap().collect();
        assert_eq!(pts.len(), 4);
        let xs: HashSet<String> = pts.iter().map(|(_, x)| x.to_string()).collect();
        assert_eq!(xs, ["00", "10", "01", "11"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn span_single_vector() {
        let s = Subspace::new(2, vec![bv("11")]).unwrap();
        let pts: Vec<_> = s.span().unwrap().collect();
        assert_eq!(pts, vec![(0, bv("00")), (1, bv("11"))]);
    }

    #[test]
    fn span_order_is_increasing_h() {
        let s = Subspace::new(5, vec![bv("10011"), bv("01010"), bv("00111")]).unwrap();
        let hs: Vec<u64> = s.span().unwrap().map(|(h, _)| h).collect();
        assert_eq!(hs, (0..8).collect::<Vec<_>>());
        // x^h really is the linear combination selected by h
        for (h, x) in s.span().unwrap() {
            let mut expect = BitVec::zeros(5);
            for k in 0..3 {
                if (h >> k) & 1 == 1 {
                    expect.xor_assign(&s.basis()[k]);
                }
            }
            assert_eq!(x, expect);
        }
    }

    #[test]
    fn span_rejects_large_dimension() {
        let n = MAX_SPAN_DIM + 1;
        let basis: Vec<BitVec> = (0..n).map(|i| BitVec::unit(n, i)).collect();
        let s = Subspace::new(n, basis).unwrap();
        assert_eq!(
            s.span().err(),
            Some(F2Error::SpanTooLarge { dim: n, max: MAX_SPAN_DIM })
        );
    }

    #[test]
    fn dependent_basis_rejected() {
        let err = Subspace::new(3, vec![bv("110"), bv("011"), bv("101")]).unwrap_err();
        assert_eq!(err, F2Error::DependentBasis { rows: 3, rank: 2 });
    }

    #[test]
    fn kernel_identity_and_zero() {
        assert_eq!(BitMatrix::identity(3).kernel().dim(), 0);
        assert_eq!(BitMatrix::zeros(2, 4).kernel().dim(), 4);
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let m = BitMatrix::from_rows(vec![bv("110101"), bv("011011"), bv("101110")]);
        let k = m.kernel();
        assert_eq!(k.dim(), 6 - m.rank());
        for y in k.basis() {
            for i in 0..m.rows() {
                assert!(!m.row(i).dot(y));
            }
        }
    }

    #[test]
    fn solve_small_system() {
        // x1 + x2 = 1, x2 = 1 -> particular (0,1), kernel dim 0
        let a = BitMatrix::from_rows(vec![bv("11"), bv("01")]);
        let (x, null) = solve_f2(&a, &bv("11")).unwrap();
        assert_eq!(x, bv("01"));
        assert_eq!(null.dim(), 0);
    }

    #[test]
    fn solve_inconsistent() {
        let a = BitMatrix::from_rows(vec![bv("00")]);
        assert!(solve_f2(&a, &bv("1")).is_none());
    }

    #[test]
    fn solve_solution_plus_kernel_still_solves() {
        let a = BitMatrix::from_rows(vec![bv("110010"), bv("011100"), bv("000111")]);
        let b = bv("101");
        let (x, null) = solve_f2(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        for y in null.basis() {
            assert_eq!(a.mul_vec(&x.xor(y)), b);
        }
    }

    #[test]
    fn rank_three_system_has_exactly_an_eighth_of_the_space() {
        // three independent rows against all-ones: 2^(d-3) solutions
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for d in 3..=6usize {
            for _ in 0..20 {
                let rows: Vec<BitVec> = loop {
                    let cand: Vec<BitVec> = (0..3)
                        .map(|_| {
                            let mut v = BitVec::zeros(d);
                            for i in 0..d {
                                v.set(i, rng.gen());
                            }
                            v
                        })
                        .collect();
                    if BitMatrix::from_rows(cand.clone()).rank() == 3 {
                        break cand;
                    }
                };
                let f = BitMatrix::from_rows(rows);
                let (x, null) = solve_f2(&f, &bv("111")).unwrap();
                assert_eq!(f.mul_vec(&x), bv("111"));
                assert_eq!(null.dim(), d - 3);
                // solution count = 2^(kernel dim) = D/8
                assert_eq!(1usize << null.dim(), (1usize << d) / 8);
            }
        }
    }

    proptest! {
        #[test]
        fn dot_is_bilinear(u in proptest::collection::vec(any::<bool>(), 12),
                           v in proptest::collection::vec(any::<bool>(), 12),
                           w in proptest::collection::vec(any::<bool>(), 12)) {
            let to_bv = |bits: &[bool]| {
                let mut x = BitVec::zeros(bits.len());
                for (i, &b) in bits.iter().enumerate() { x.set(i, b); }
                x
            };
            let (u, v, w) = (to_bv(&u), to_bv(&v), to_bv(&w));
            prop_assert_eq!(u.xor(&v).dot(&w), u.dot(&w) ^ v.dot(&w));
        }

        #[test]
        fn span_has_distinct_elements(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..10);
            let rows: Vec<BitVec> = (0..rng.gen_range(1..=n))
                .map(|_| {
                    let mut v = BitVec::zeros(n);
                    for i in 0..n { v.set(i, rng.gen()); }
                    v
                })
                .collect();
            let s = Subspace::from_spanning(n, rows);
            let pts: Vec<_> = s.span().unwrap().collect();
            prop_assert_eq!(pts.len(), 1 << s.dim());
            let distinct: HashSet<String> = pts.iter().map(|(_, x)| x.to_string()).collect();
            prop_assert_eq!(distinct.len(), pts.len());
        }
    }
}
