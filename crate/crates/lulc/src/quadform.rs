//! Quadratic forms over F₂ viewed as simple graphs: term evaluation, the
//! induced-subgraph evaluation, linear-term normalization, and pattern-class
//! edge counts.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::f2::{BitMatrix, BitVec};
use crate::mat::Rat;
use crate::patterns::{PairIndexer, Partition, Pattern, PatternError};
use crate::phase::PhaseAssignment;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("term ({}, {}) out of range for n = {n}", .i + 1, .j + 1)]
    TermOutOfRange { i: usize, j: usize, n: usize },
    #[error("self-loop term at position {}", .0 + 1)]
    SelfLoop(usize),
    #[error("duplicate term ({}, {})", .0 + 1, .1 + 1)]
    DuplicateTerm(usize, usize),
    #[error("operation requires a pure quadratic form (no linear terms)")]
    NotPure,
    #[error("dimension mismatch: form has n = {form}, argument has {got}")]
    DimensionMismatch { form: usize, got: usize },
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A quadratic function Q(x) = Σ_{(i,j)∈E} x_i x_j + Σ_{i∈L} x_i over F₂,
/// with the edge set E of a simple graph on {0..n-1} and linear part L.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    linear: BTreeSet<usize>,
}

impl QuadraticForm {
    #[must_use]
    pub fn zero(n: usize) -> Self {
        Self { n, edges: BTreeSet::new(), linear: BTreeSet::new() }
    }

    /// Build from quadratic terms; indices are 0-based and each pair must
    /// be i < j, in range and distinct.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, QuadFormError> {
        let mut q = Self::zero(n);
        for (i, j) in edges {
            q.insert_edge(i, j)?;
        }
        Ok(q)
    }

    pub fn from_terms(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        linear: impl IntoIterator<Item = usize>,
    ) -> Result<Self, QuadFormError> {
        let mut q = Self::from_edges(n, edges)?;
        for i in linear {
            if i >= n {
                return Err(QuadFormError::TermOutOfRange { i, j: i, n });
            }
            if !q.linear.insert(i) {
                return Err(QuadFormError::DuplicateTerm(i, i));
            }
        }
        Ok(q)
    }

    fn insert_edge(&mut self, i: usize, j: usize) -> Result<(), QuadFormError> {
        if i == j {
            return Err(QuadFormError::SelfLoop(i));
        }
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if j >= self.n {
            return Err(QuadFormError::TermOutOfRange { i, j, n: self.n });
        }
        if !self.edges.insert((i, j)) {
            return Err(QuadFormError::DuplicateTerm(i, j));
        }
        Ok(())
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    #[must_use]
    pub fn linear(&self) -> &BTreeSet<usize> {
        &self.linear
    }

    #[must_use]
    pub fn is_pure(&self) -> bool {
        self.linear.is_empty()
    }

    /// Adjacency matrix of the term graph (symmetric, zero diagonal).
    #[must_use]
    pub fn adjacency(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            m.set(i, j, true);
            m.set(j, i, true);
        }
        m
    }

    /// Term-by-term evaluation of Q(x) over F₂.
    pub fn eval_terms(&self, x: &BitVec) -> bool {
        assert_eq!(
            x.len(),
            self.n,
            "argument length {} != form dimension {}",
            x.len(),
            self.n
        );
        let mut acc = false;
        for &(i, j) in &self.edges {
            acc ^= x.get(i) & x.get(j);
        }
        for &i in &self.linear {
            acc ^= x.get(i);
        }
        acc
    }

    /// Parity of the edge count of the subgraph induced by the support of x.
    /// Requires a pure form; must agree with [`Self::eval_terms`].
    pub fn eval_subgraph(&self, x: &BitVec) -> Result<bool, QuadFormError> {
        if !self.is_pure() {
            return Err(QuadFormError::NotPure);
        }
        if x.len() != self.n {
            return Err(QuadFormError::DimensionMismatch { form: self.n, got: x.len() });
        }
        let count = self
            .edges
            .iter()
            .filter(|&&(i, j)| x.get(i) && x.get(j))
            .count();
        Ok(count % 2 == 1)
    }

    /// Move linear terms into per-position phases: the returned pure form
    /// and shift satisfy (−1)^{Q(x)} = (−1)^{pure(x)} · ∏_j i^{shift_j x_j}.
    #[must_use]
    pub fn normalize_linear(&self) -> (QuadraticForm, PhaseAssignment) {
        let pure = QuadraticForm { n: self.n, edges: self.edges.clone(), linear: BTreeSet::new() };
        let mut shift = vec![Rat::from_integer(0); self.n];
        for &i in &self.linear {
            shift[i] = Rat::from_integer(2); // i^2 = -1
        }
        (pure, PhaseAssignment::from_rationals(shift))
    }

    /// Edge counts by pattern class: cross-class counts E_{mm'} and the
    /// within-class counts |E(Q|A_m)|.
    pub fn e_vector(&self, partition: &Partition) -> Result<EVector, QuadFormError> {
        if !self.is_pure() {
            return Err(QuadFormError::NotPure);
        }
        if partition.ambient() != self.n {
            return Err(QuadFormError::DimensionMismatch {
                form: self.n,
                got: partition.ambient(),
            });
        }
        let pairs = PairIndexer::new(partition.rank())?;
        let mut ev = EVector {
            pairs,
            cross: vec![0; pairs.num_pairs()],
            internal: vec![0; pairs.num_patterns()],
            complete: partition.is_complete(),
        };
        for &(i, j) in &self.edges {
            let (mi, mj) = (partition.pattern_of(i), partition.pattern_of(j));
            if mi == mj {
                ev.internal[mi.index()] += 1;
            } else {
                let (a, b) = if mi < mj { (mi, mj) } else { (mj, mi) };
                ev.cross[pairs.col(a, b)] += 1;
            }
        }
        Ok(ev)
    }

    /// Evaluate Q(x^h) through the pattern decomposition
    /// Σ_m ⟨m,h⟩|E(Q|A_m)| + Σ_{m<m'} ⟨m,h⟩⟨m',h⟩ E_{mm'} (mod 2);
    /// must agree with [`Self::eval_terms`] on every span element.
    pub fn eval_by_patterns(&self, partition: &Partition, h: u64) -> Result<bool, QuadFormError> {
        let ev = self.e_vector(partition)?;
        let mut acc: i64 = 0;
        for idx in 0..ev.pairs.num_patterns() {
            let m = Pattern::from_index(idx);
            if m.dot(h) {
                acc += ev.internal[idx];
            }
        }
        for c in 0..ev.pairs.num_pairs() {
            if ev.cross[c] != 0 {
                let (m, m2) = ev.pairs.pair(c);
                if m.dot(h) && m2.dot(h) {
                    acc += ev.cross[c];
                }
            }
        }
        Ok(acc % 2 == 1)
    }
}

/// Pattern-pair edge counts of a pure form under a partition.
#[derive(Clone, Debug)]
pub struct EVector {
    pairs: PairIndexer,
    cross: Vec<i64>,
    internal: Vec<i64>,
    complete: bool,
}

impl EVector {
    /// Zero vector for rank d.
    pub fn zeros(d: usize, complete: bool) -> Result<Self, PatternError> {
        let pairs = PairIndexer::new(d)?;
        Ok(Self {
            pairs,
            cross: vec![0; pairs.num_pairs()],
            internal: vec![0; pairs.num_patterns()],
            complete,
        })
    }

    #[must_use]
    pub fn indexer(&self) -> PairIndexer {
        self.pairs
    }

    /// E_{mm'} for m < m'.
    pub fn cross(&self, m: Pattern, m2: Pattern) -> i64 {
        self.cross[self.pairs.col(m, m2)]
    }

    #[must_use]
    pub fn cross_entries(&self) -> &[i64] {
        &self.cross
    }

    pub fn set_cross(&mut self, m: Pattern, m2: Pattern, v: i64) {
        let c = self.pairs.col(m, m2);
        self.cross[c] = v;
    }

    /// |E(Q|A_m)|, the within-class edge count.
    pub fn internal(&self, m: Pattern) -> i64 {
        self.internal[m.index()]
    }

    #[must_use]
    pub fn internal_entries(&self) -> &[i64] {
        &self.internal
    }

    #[must_use]
    pub fn total_cross(&self) -> i64 {
        self.cross.iter().sum()
    }

    /// Whether every pattern class of the originating partition is nonempty.
    #[must_use]
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::Subspace;
    use crate::forge::{published_basis, published_form};
    use crate::patterns::partition_positions;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn eval_zero_vector_is_zero() {
        let q = QuadraticForm::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!q.eval_terms(&BitVec::zeros(4)));
    }

    #[test]
    fn eval_on_published_basis_vectors() {
        let q = published_form();
        let s = published_basis();
        // all of x1..x8 vanish on the sixth basis vector
        assert!(!q.eval_terms(&s.basis()[5]));
        // first basis vector: brute-force equals subgraph parity
        let x = &s.basis()[0];
        assert_eq!(q.eval_terms(x), q.eval_subgraph(x).unwrap());
    }

    #[test]
    fn subgraph_evaluation_examples() {
        let q = QuadraticForm::from_edges(3, [(0, 1)]).unwrap();
        assert!(q.eval_subgraph(&bv("110")).unwrap());
        assert!(!q.eval_subgraph(&bv("101")).unwrap());
    }

    #[test]
    fn subgraph_requires_pure() {
        let q = QuadraticForm::from_terms(2, [], [0]).unwrap();
        assert_eq!(q.eval_subgraph(&bv("10")).unwrap_err(), QuadFormError::NotPure);
    }

    #[test]
    fn methods_agree_exhaustively_small_n() {
        for n in 1..=6usize {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..20 {
                let mut q = QuadraticForm::zero(n);
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen() {
                            q.insert_edge(i, j).unwrap();
                        }
                    }
                }
                for bits in 0..1u32 << n {
                    let mut x = BitVec::zeros(n);
                    for i in 0..n {
                        if (bits >> i) & 1 == 1 {
                            x.set(i, true);
                        }
                    }
                    assert_eq!(q.eval_terms(&x), q.eval_subgraph(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn normalize_linear_identity_on_span() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..30 {
            let n = rng.gen_range(4..=8usize);
            let d = rng.gen_range(1..=4usize).min(n);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen())
                .collect();
            let linear: Vec<usize> = (0..n).filter(|_| rng.gen()).collect();
            let q = QuadraticForm::from_terms(n, edges, linear).unwrap();
            let (pure, shift) = q.normalize_linear();
            assert!(pure.is_pure());

            // random subspace; compare (-1)^Q with (-1)^pure * prod i^{r_j x_j}
            let rows: Vec<BitVec> = (0..d)
                .map(|_| {
                    let mut v = BitVec::zeros(n);
                    for i in 0..n {
                        v.set(i, rng.gen());
                    }
                    v
                })
                .collect();
            let s = Subspace::from_spanning(n, rows);
            for (_, x) in s.span().unwrap() {
                // exponent arithmetic mod 4: 2*Q(x) vs 2*pure(x) + sum shift_j x_j
                let lhs = 2 * i64::from(q.eval_terms(&x));
                let mut rhs = Rat::from_integer(2 * i64::from(pure.eval_terms(&x)));
                for j in 0..n {
                    if x.get(j) {
                        rhs += shift.get(j);
                    }
                }
                let diff = rhs - Rat::from_integer(lhs);
                assert!(
                    diff.is_integer() && diff.to_integer().rem_euclid(4) == 0,
                    "trial {trial}: phase identity broken"
                );
            }
        }
    }

    #[test]
    fn normalize_pure_is_identity() {
        let q = QuadraticForm::from_edges(3, [(0, 2)]).unwrap();
        let (pure, shift) = q.normalize_linear();
        assert_eq!(pure, q);
        assert!(shift.is_zero());
    }

    #[test]
    fn normalize_single_linear_term() {
        let q = QuadraticForm::from_terms(2, [], [0]).unwrap();
        let (pure, shift) = q.normalize_linear();
        assert!(pure.edges().is_empty());
        assert_eq!(shift.get(0), Rat::from_integer(2));
        assert_eq!(shift.get(1), Rat::from_integer(0));
    }

    #[test]
    fn published_e_vector() {
        let q = published_form();
        let s = published_basis();
        let p = partition_positions(&s).unwrap();
        let ev = q.e_vector(&p).unwrap();
        // the x1 x2 edge sits between patterns v=3 (position 1) and v=4 (position 2)
        assert_eq!(ev.cross(Pattern::new(3), Pattern::new(4)), 1);
        // 11 edges, all in distinct pattern pairs, none internal
        assert_eq!(ev.total_cross(), 11);
        assert!(ev.cross_entries().iter().all(|&c| c == 0 || c == 1));
        assert!(ev.internal_entries().iter().all(|&c| c == 0));
    }

    #[test]
    fn empty_form_gives_zero_vector() {
        let s = published_basis();
        let p = partition_positions(&s).unwrap();
        let ev = QuadraticForm::zero(27).e_vector(&p).unwrap();
        assert_eq!(ev.total_cross(), 0);
        assert!(ev.internal_entries().iter().all(|&c| c == 0));
    }

    #[test]
    fn pattern_decomposition_matches_published_instance() {
        let q = published_form();
        let s = published_basis();
        let p = partition_positions(&s).unwrap();
        for (h, x) in s.span().unwrap() {
            assert_eq!(q.eval_by_patterns(&p, h).unwrap(), q.eval_terms(&x), "h = {h}");
        }
    }

    #[test]
    fn pattern_decomposition_h_zero() {
        let q = published_form();
        let p = partition_positions(&published_basis()).unwrap();
        assert!(!q.eval_by_patterns(&p, 0).unwrap());
    }

    #[test]
    fn pattern_decomposition_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let d = rng.gen_range(2..=5usize);
            let n = rng.gen_range(d..=11);
            let mut cols: Vec<u32> = (0..n).map(|_| rng.gen_range(1..1u32 << d)).collect();
            for (k, c) in cols.iter_mut().take(d).enumerate() {
                *c = 1 << k;
            }
            let basis: Vec<BitVec> = (0..d)
                .map(|k| {
                    let mut row = BitVec::zeros(n);
                    for (j, &c) in cols.iter().enumerate() {
                        if (c >> k) & 1 == 1 {
                            row.set(j, true);
                        }
                    }
                    row
                })
                .collect();
            let s = Subspace::new(n, basis).unwrap();
            let p = partition_positions(&s).unwrap();
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen())
                .collect();
            let q = QuadraticForm::from_edges(n, edges).unwrap();
            for (h, x) in s.span().unwrap() {
                assert_eq!(q.eval_by_patterns(&p, h).unwrap(), q.eval_terms(&x));
            }
        }
    }

    #[test]
    fn constructor_rejects_bad_terms() {
        assert_eq!(
            QuadraticForm::from_edges(3, [(1, 1)]).unwrap_err(),
            QuadFormError::SelfLoop(1)
        );
        assert_eq!(
            QuadraticForm::from_edges(3, [(0, 3)]).unwrap_err(),
            QuadFormError::TermOutOfRange { i: 0, j: 3, n: 3 }
        );
        assert_eq!(
            QuadraticForm::from_edges(3, [(0, 1), (1, 0)]).unwrap_err(),
            QuadFormError::DuplicateTerm(0, 1)
        );
    }
}
