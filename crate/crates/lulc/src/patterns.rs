//! Position patterns of a subspace basis, the partition {A_m}, and the
//! exact matrices G, T, G⁻¹ and 2G⁻¹T built on the pairing ⟨i,j⟩.
//!
//! Patterns are the nonzero d-bit columns of the basis matrix; basis row 0
//! is the least significant bit. All matrix rows and columns are ordered by
//! increasing pattern value, which keeps tests and file formats
//! deterministic.

use thiserror::Error;

use crate::f2::Subspace;
use crate::mat::{IntMatrix, Rat, RatMatrix};

/// Largest supported rank: D−1 = 255 rows, T up to ~32k columns.
pub const MAX_RANK: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("rank {0} out of range (supported 1..={MAX_RANK})")]
    RankOutOfRange(usize),
    #[error("position {} has pattern zero (identically zero coordinate on S); trim it first", .position + 1)]
    DegeneratePosition { position: usize },
}

/// Parity of the F₂ inner product of two d-bit values.
#[inline]
#[must_use]
pub fn pairing(i: u32, j: u32) -> bool {
    (i & j).count_ones() & 1 == 1
}

/// A nonzero pattern m ∈ F₂^d, identified by its integer value
/// v(m) = Σ m_k 2^(k−1) with basis row 0 least significant.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern(u32);

impl Pattern {
    pub fn new(value: u32) -> Self {
        assert!(value != 0, "pattern value must be nonzero");
        Self(value)
    }

    #[must_use]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Row/column index of this pattern in v-ordered matrices.
    #[must_use]
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    #[must_use]
    pub fn from_index(index: usize) -> Self {
        Self::new(index as u32 + 1)
    }

    /// Coefficient of basis row k in this pattern.
    #[must_use]
    pub fn bit(self, k: usize) -> bool {
        (self.0 >> k) & 1 == 1
    }

    /// ⟨m, h⟩ with h packed as an integer the same way.
    #[must_use]
    pub fn dot(self, h: u64) -> bool {
        (u64::from(self.0) & h).count_ones() & 1 == 1
    }

    /// m ⊕ m'; `None` when the two patterns are equal.
    #[must_use]
    pub fn xor(self, other: Pattern) -> Option<Pattern> {
        let v = self.0 ^ other.0;
        (v != 0).then(|| Pattern::new(v))
    }
}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Column indexing for pair-indexed matrices: pairs (j,k) with
/// 1 ≤ v(j) < v(k) ≤ D−1, lexicographic in (v(j), v(k)).
#[derive(Copy, Clone, Debug)]
pub struct PairIndexer {
    count: u32, // D − 1
}

impl PairIndexer {
    pub fn new(d: usize) -> Result<Self, PatternError> {
        check_rank(d)?;
        Ok(Self { count: (1u32 << d) - 1 })
    }

    #[must_use]
    pub fn num_patterns(&self) -> usize {
        self.count as usize
    }

    #[must_use]
    pub fn num_pairs(&self) -> usize {
        let m = self.count as usize;
        m * (m - 1) / 2
    }

    pub fn col(&self, j: Pattern, k: Pattern) -> usize {
        let (j, k) = (j.value() as usize, k.value() as usize);
        assert!(j < k && k <= self.count as usize, "bad pattern pair ({j},{k})");
        let m = self.count as usize;
        (j - 1) * m - j * (j - 1) / 2 + (k - j - 1)
    }

    pub fn pair(&self, col: usize) -> (Pattern, Pattern) {
        let m = self.count as usize;
        assert!(col < self.num_pairs(), "pair column {col} out of range");
        let mut j = 1;
        let mut rem = col;
        while rem >= m - j {
            rem -= m - j;
            j += 1;
        }
        (Pattern::new(j as u32), Pattern::new((j + rem + 1) as u32))
    }

    /// All pairs (j,k) with j ⊕ k = target, in column order.
    pub fn pairs_xoring_to(&self, target: Pattern) -> Vec<(Pattern, Pattern)> {
        let mut out = Vec::new();
        for jv in 1..=self.count {
            let kv = jv ^ target.value();
            if kv > jv && kv <= self.count {
                out.push((Pattern::new(jv), Pattern::new(kv)));
            }
        }
        out
    }
}

fn check_rank(d: usize) -> Result<(), PatternError> {
    if d == 0 || d > MAX_RANK {
        return Err(PatternError::RankOutOfRange(d));
    }
    Ok(())
}

/// The partition of positions {0..n-1} into pattern classes A_m.
#[derive(Clone, Debug)]
pub struct Partition {
    n: usize,
    d: usize,
    classes: Vec<Vec<usize>>,
    pos_pattern: Vec<Pattern>,
}

impl Partition {
    #[must_use]
    pub fn ambient(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.d
    }

    /// Positions in class A_m (possibly empty), ascending.
    pub fn class(&self, m: Pattern) -> &[usize] {
        &self.classes[m.index()]
    }

    pub fn pattern_of(&self, position: usize) -> Pattern {
        self.pos_pattern[position]
    }

    /// Patterns whose class is empty, in increasing value order.
    pub fn missing(&self) -> Vec<Pattern> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].is_empty())
            .map(Pattern::from_index)
            .collect()
    }

    #[must_use]
    pub fn is_complete(&self) -> bool {
        self.classes.iter().all(|c| !c.is_empty())
    }

    #[must_use]
    pub fn all_singletons(&self) -> bool {
        self.classes.iter().all(|c| c.len() <= 1)
    }
}

/// Pattern of a single position: the column of the basis matrix read as a
/// d-bit value. `None` marks a pattern-zero position (the coordinate is
/// identically zero on S).
pub fn pattern_of_position(s: &Subspace, position: usize) -> Option<Pattern> {
    assert!(position < s.ambient(), "position {position} out of range");
    let mut v = 0u32;
    for (k, row) in s.basis().iter().enumerate() {
        if row.get(position) {
            v |= 1 << k;
        }
    }
    (v != 0).then(|| Pattern::new(v))
}

/// Partition all positions by pattern. Pattern-zero positions are rejected:
/// their phase is unconstrained and callers must pre-trim them.
pub fn partition_positions(s: &Subspace) -> Result<Partition, PatternError> {
    let d = s.dim();
    check_rank(d)?;
    let count = (1usize << d) - 1;
    let mut classes = vec![Vec::new(); count];
    let mut pos_pattern = Vec::with_capacity(s.ambient());
    for j in 0..s.ambient() {
        let m = pattern_of_position(s, j)
            .ok_or(PatternError::DegeneratePosition { position: j })?;
        classes[m.index()].push(j);
        pos_pattern.push(m);
    }
    Ok(Partition { n: s.ambient(), d, classes, pos_pattern })
}

/// The (D−1)×(D−1) matrix G with G_{ij} = ⟨i,j⟩.
pub fn build_g(d: usize) -> Result<IntMatrix, PatternError> {
    check_rank(d)?;
    let m = (1usize << d) - 1;
    Ok(IntMatrix::from_fn(m, m, |i, j| {
        i64::from(pairing(i as u32 + 1, j as u32 + 1))
    }))
}

/// The (D−1)×C(D−1,2) matrix T with T_{i,(j,k)} = ⟨i,j⟩⟨i,k⟩.
pub fn build_t(d: usize) -> Result<IntMatrix, PatternError> {
    let pairs = PairIndexer::new(d)?;
    let m = pairs.num_patterns();
    let mut t = IntMatrix::zeros(m, pairs.num_pairs());
    for c in 0..pairs.num_pairs() {
        let (j, k) = pairs.pair(c);
        for i in 0..m {
            let iv = i as u32 + 1;
            if pairing(iv, j.value()) && pairing(iv, k.value()) {
                t.set(i, c, 1);
            }
        }
    }
    Ok(t)
}

/// G⁻¹ = (2/D)(2⟨i,j⟩ − 1): replace zeros of G with −1 and normalize.
pub fn g_inverse(d: usize) -> Result<RatMatrix, PatternError> {
    check_rank(d)?;
    let m = (1usize << d) - 1;
    let scale = Rat::new(2, 1i64 << d);
    Ok(RatMatrix::from_fn(m, m, |i, j| {
        let s = if pairing(i as u32 + 1, j as u32 + 1) { 1 } else { -1 };
        scale * Rat::from_integer(s)
    }))
}

/// The integral matrix 2G⁻¹T from its closed form: +1 at (i,(j,k)) when
/// i = j or i = k, −1 when i = j⊕k, 0 elsewhere.
pub fn two_ginv_t(d: usize) -> Result<IntMatrix, PatternError> {
    let pairs = PairIndexer::new(d)?;
    let m = pairs.num_patterns();
    let mut out = IntMatrix::zeros(m, pairs.num_pairs());
    for c in 0..pairs.num_pairs() {
        let (j, k) = pairs.pair(c);
        let x = j.xor(k).expect("distinct patterns");
        out.set(j.index(), c, 1);
        out.set(k.index(), c, 1);
        out.set(x.index(), c, -1);
    }
    Ok(out)
}
