//! The QFP decision core: exact phase verification over a span, the mod-4
//! linear congruence system with its two-phase elimination, the all-patterns
//! integral solution and the low-rank truncation theorems.
//!
//! Unknown exponents live in ℤ₄ (c_j = i^{r_j}); asking for phases in
//! {±1, ±i} is exactly asking for an integral solution mod 4.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{BitVec, F2Error, Subspace};
use crate::mat::Rat;
use crate::patterns::{g_inverse, two_ginv_t, Partition, Pattern, PatternError};
use crate::phase::{rat_is_zero_mod4, PhaseAssignment};
use crate::quadform::{EVector, QuadFormError, QuadraticForm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("form dimension {form} does not match subspace ambient {ambient}")]
    DimensionMismatch { form: usize, ambient: usize },
    #[error("phase assignment has length {got}, instance has {expected} positions")]
    PhaseLengthMismatch { expected: usize, got: usize },
    #[error("instance requires a pure quadratic form")]
    NotPure,
    #[error("position {} is identically zero on S; delete it before solving", .position + 1)]
    PatternZeroPosition { position: usize },
    #[error("witness fails the phase identity at span point h = {h}")]
    InvalidWitness { h: u64 },
    #[error("some pattern class is empty; the all-patterns solution does not apply")]
    MissingPattern,
    #[error("the truncation theorem covers ranks 1..=5, got d = {0}")]
    OutOfTheorem(usize),
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
}

/// A subspace S together with a pure quadratic form Q on the same
/// coordinates: one phase-problem instance.
#[derive(Clone, Debug)]
pub struct QfpInstance {
    s: Subspace,
    q: QuadraticForm,
}

impl QfpInstance {
    /// Validates: matching dimensions, pure form, no identically-zero
    /// coordinate (pattern-zero position) on S.
    pub fn new(s: Subspace, q: QuadraticForm) -> Result<Self, SolverError> {
        if q.n() != s.ambient() {
            return Err(SolverError::DimensionMismatch { form: q.n(), ambient: s.ambient() });
        }
        if !q.is_pure() {
            return Err(SolverError::NotPure);
        }
        for j in 0..s.ambient() {
            if s.basis().iter().all(|row| !row.get(j)) {
                return Err(SolverError::PatternZeroPosition { position: j });
            }
        }
        Ok(Self { s, q })
    }

    #[must_use]
    pub fn subspace(&self) -> &Subspace {
        &self.s
    }

    #[must_use]
    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.s.ambient()
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        self.s.dim()
    }
}

/// First span point where Σ_j r_j x_j ≢ 2 Q(x) (mod 4), if any.
pub fn phase_violation(
    inst: &QfpInstance,
    p: &PhaseAssignment,
) -> Result<Option<(u64, BitVec)>, SolverError> {
    if p.len() != inst.n() {
        return Err(SolverError::PhaseLengthMismatch { expected: inst.n(), got: p.len() });
    }
    for (h, x) in inst.s.span()? {
        let mut lhs = Rat::from_integer(0);
        for j in x.ones() {
            lhs += p.get(j);
        }
        let rhs = Rat::from_integer(2 * i64::from(inst.q.eval_terms(&x)));
        if !rat_is_zero_mod4(lhs - rhs) {
            return Ok(Some((h, x)));
        }
    }
    Ok(None)
}

/// True iff the phase identity (−1)^{Q(x)} = ∏ c_j^{x_j} holds on all of S,
/// checked as the exact congruence Σ r_j x_j ≡ 2 Q(x) (mod 4).
pub fn phase_check(inst: &QfpInstance, p: &PhaseAssignment) -> Result<bool, SolverError> {
    Ok(phase_violation(inst, p)?.is_none())
}

/// An integer congruence system A·x ≡ b (mod 4), entries reduced to 0..4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod4System {
    a: Vec<Vec<u8>>,
    b: Vec<u8>,
    unknowns: usize,
}

impl Mod4System {
    pub fn new(a: Vec<Vec<u8>>, b: Vec<u8>, unknowns: usize) -> Self {
        assert_eq!(a.len(), b.len(), "row/rhs count mismatch");
        for row in &a {
            assert_eq!(row.len(), unknowns, "row width mismatch");
        }
        let a = a
            .into_iter()
            .map(|row| row.into_iter().map(|v| v % 4).collect())
            .collect();
        let b = b.into_iter().map(|v| v % 4).collect();
        Self { a, b, unknowns }
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.a.len()
    }

    #[must_use]
    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    #[must_use]
    pub fn row(&self, i: usize) -> (&[u8], u8) {
        (&self.a[i], self.b[i])
    }

    /// Does x satisfy every congruence?
    pub fn is_satisfied_by(&self, x: &[u8]) -> bool {
        assert_eq!(x.len(), self.unknowns, "solution width mismatch");
        self.a.iter().zip(&self.b).all(|(row, &rhs)| {
            let lhs: u32 = row.iter().zip(x).map(|(&a, &v)| u32::from(a) * u32::from(v)).sum();
            lhs % 4 == u32::from(rhs)
        })
    }
}

/// One row per nonzero x ∈ S: coefficients x_j, right-hand side 2·Q(x).
/// The unknowns are the integral exponents r_j of i.
pub fn build_mod4_system(inst: &QfpInstance) -> Result<Mod4System, SolverError> {
    let n = inst.n();
    let mut a = Vec::with_capacity((1usize << inst.rank()) - 1);
    let mut b = Vec::with_capacity(a.capacity());
    for (h, x) in inst.s.span()? {
        if h == 0 {
            continue;
        }
        let row: Vec<u8> = (0..n).map(|j| u8::from(x.get(j))).collect();
        a.push(row);
        b.push(2 * u8::from(inst.q.eval_terms(&x)));
    }
    Ok(Mod4System::new(a, b, n))
}

/// A replayable witness that the system forces 0 ≡ rhs (mod 4) with
/// rhs ≠ 0: `combination[i]` is the multiplier of original row i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionCert {
    pub combination: Vec<u8>,
    pub rhs: u8,
}

impl ContradictionCert {
    /// Re-derive the contradicting row from the original system: the
    /// recorded combination must produce all-zero coefficients and a
    /// nonzero right-hand side, all mod 4.
    pub fn replay(&self, sys: &Mod4System) -> bool {
        if self.combination.len() != sys.rows() || self.rhs % 4 == 0 {
            return false;
        }
        let mut coef = vec![0u32; sys.unknowns()];
        let mut rhs = 0u32;
        for (i, &lambda) in self.combination.iter().enumerate() {
            if lambda % 4 == 0 {
                continue;
            }
            let (row, b) = sys.row(i);
            for (c, &v) in coef.iter_mut().zip(row) {
                *c += u32::from(lambda) * u32::from(v);
            }
            rhs += u32::from(lambda) * u32::from(b);
        }
        coef.iter().all(|&c| c % 4 == 0) && rhs % 4 == u32::from(self.rhs)
    }
}

/// Result of the exact mod-4 decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Vec<u8>),
    Contradiction(ContradictionCert),
}

#[derive(Clone)]
struct WorkRow {
    coef: Vec<u8>,
    rhs: u8,
    prov: Vec<u8>,
}

impl WorkRow {
    fn scale3(&mut self) {
        for c in &mut self.coef {
            *c = (*c * 3) % 4;
        }
        self.rhs = (self.rhs * 3) % 4;
        for p in &mut self.prov {
            *p = (*p * 3) % 4;
        }
    }

    /// self -= factor * other (mod 4)
    fn sub_mul(&mut self, other: &WorkRow, factor: u8) {
        let neg = (4 - factor % 4) % 4;
        if neg == 0 {
            return;
        }
        for (a, &b) in self.coef.iter_mut().zip(&other.coef) {
            *a = (*a + neg * b) % 4;
        }
        self.rhs = (self.rhs + neg * other.rhs) % 4;
        for (a, &b) in self.prov.iter_mut().zip(&other.prov) {
            *a = (*a + neg * b) % 4;
        }
    }

    fn doubled(&self) -> WorkRow {
        WorkRow {
            coef: self.coef.iter().map(|&c| (c * 2) % 4).collect(),
            rhs: (self.rhs * 2) % 4,
            prov: self.prov.iter().map(|&p| (p * 2) % 4).collect(),
        }
    }

    fn is_zero_coef(&self) -> bool {
        self.coef.iter().all(|&c| c == 0)
    }
}

/// Modified Gaussian elimination over ℤ₄.
///
/// Per column: prefer a row with an odd pivot (scaling by 3 when the pivot
/// is 3, since 3·3 ≡ 1); otherwise eliminate among even pivots by
/// subtraction. An even-pivot row only fixes its variable mod 2, so its
/// double (an integer combination of the original rows) re-enters the
/// elimination; that keeps the decision exact. Back-substitution sets free
/// variables to 0. Ties break to the lowest active row.
pub fn solve_mod4(sys: &Mod4System) -> SolveOutcome {
    let n = sys.unknowns();
    let nrows = sys.rows();
    let mut active: Vec<WorkRow> = (0..nrows)
        .map(|i| {
            let (row, rhs) = sys.row(i);
            let mut prov = vec![0u8; nrows];
            prov[i] = 1;
            WorkRow { coef: row.to_vec(), rhs, prov }
        })
        .collect();
    let mut pivots: Vec<(usize, WorkRow, u8)> = Vec::new();

    for col in 0..n {
        if let Some(pos) = active.iter().position(|r| r.coef[col] % 2 == 1) {
            let mut p = active.remove(pos);
            if p.coef[col] == 3 {
                p.scale3();
            }
            for q in &mut active {
                let f = q.coef[col];
                if f != 0 {
                    q.sub_mul(&p, f);
                }
            }
            pivots.push((col, p, 1));
        } else if let Some(pos) = active.iter().position(|r| r.coef[col] == 2) {
            let p = active.remove(pos);
            for q in &mut active {
                if q.coef[col] == 2 {
                    q.sub_mul(&p, 1);
                }
            }
            active.push(p.doubled());
            pivots.push((col, p, 2));
        }
    }

    for r in &active {
        debug_assert!(r.is_zero_coef(), "non-pivot row survived all columns");
        if r.rhs % 4 != 0 {
            return SolveOutcome::Contradiction(ContradictionCert {
                combination: r.prov.clone(),
                rhs: r.rhs % 4,
            });
        }
    }

    let mut x = vec![0u8; n];
    for (col, row, pivot) in pivots.iter().rev() {
        let mut v = i64::from(row.rhs);
        for j in col + 1..n {
            v -= i64::from(row.coef[j]) * i64::from(x[j]);
        }
        let v = v.rem_euclid(4) as u8;
        if *pivot == 1 {
            x[*col] = v;
        } else {
            assert!(v % 2 == 0, "even-pivot residue must be even after annihilator pass");
            x[*col] = v / 2;
        }
    }
    debug_assert!(sys.is_satisfied_by(&x));
    SolveOutcome::Solution(x)
}

/// The always-integral solution of the all-patterns special case:
/// r_m = (2G⁻¹T e)_m + 2·|E(Q|A_m)|, computed from the closed form.
/// Indexed by pattern; use [`assign_representatives`] to place it on
/// positions.
pub fn allpatterns_solution(e: &EVector, d: usize) -> Result<PhaseAssignment, SolverError> {
    if !e.is_complete() {
        return Err(SolverError::MissingPattern);
    }
    let m = two_ginv_t(d)?;
    let mut r: Vec<i64> = vec![0; m.rows()];
    for c in 0..m.cols() {
        let count = e.cross_entries()[c];
        if count == 0 {
            continue;
        }
        for i in 0..m.rows() {
            r[i] += m.at(i, c) * count;
        }
    }
    for (i, v) in r.iter_mut().enumerate() {
        *v += 2 * e.internal(Pattern::from_index(i));
    }
    Ok(PhaseAssignment::from_integers(&r))
}

/// Place a pattern-indexed assignment on positions: one representative per
/// class carries r_[m], every other position gets 0.
pub fn assign_representatives(
    pattern_r: &PhaseAssignment,
    partition: &Partition,
) -> PhaseAssignment {
    let mut r = vec![Rat::from_integer(0); partition.ambient()];
    for idx in 0..pattern_r.len() {
        let class = partition.class(Pattern::from_index(idx));
        if let Some(&rep) = class.first() {
            r[rep] = pattern_r.get(idx);
        }
    }
    PhaseAssignment::from_rationals(r)
}

/// The low-rank integral solution: for d ≤ 5 the entrywise floor of any
/// rational solution is again a solution (for d ≤ 4 via the half-integral
/// case analysis, for d = 5 via the truncation identity).
pub fn lowrank_integral(r: &PhaseAssignment, d: usize) -> Result<PhaseAssignment, SolverError> {
    if d == 0 || d > 5 {
        return Err(SolverError::OutOfTheorem(d));
    }
    Ok(r.floor())
}

/// General real-solution parametrization r = 2G⁻¹T e + 4G⁻¹ s for an
/// integral vector s; every such r solves G r ≡ 2T e (mod 4).
pub fn parametrized_solution(d: usize, e: &EVector, s: &[i64]) -> Result<Vec<Rat>, SolverError> {
    let m = two_ginv_t(d)?;
    assert_eq!(s.len(), m.rows(), "s has wrong length");
    let mut r: Vec<Rat> = vec![Rat::from_integer(0); m.rows()];
    for c in 0..m.cols() {
        let count = e.cross_entries()[c];
        if count == 0 {
            continue;
        }
        for i in 0..m.rows() {
            r[i] += Rat::from_integer(m.at(i, c) * count);
        }
    }
    let gi = g_inverse(d)?;
    let four_gi_s = gi.mul_int_vec(s);
    for (ri, fg) in r.iter_mut().zip(four_gi_s) {
        *ri += fg * Rat::from_integer(4);
    }
    Ok(r)
}

/// Outcome of the full QFP decision on an instance.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// The mod-4 system is solvable: phases exist in {±1, ±i}.
    FourthRootSolution(PhaseAssignment),
    /// A verified complex-phase witness exists but the mod-4 system is
    /// contradictory: the instance refutes the conjecture.
    Counterexample { witness: PhaseAssignment, certificate: ContradictionCert },
    /// The mod-4 system is contradictory but no complex witness was given,
    /// so only the mod-4 refutation is reported.
    NoRealWitnessProvided { certificate: ContradictionCert },
}

/// Decide an instance: verify the witness (when given) exactly, then decide
/// the mod-4 system. A counterexample verdict requires both a validated
/// witness and a mod-4 contradiction.
pub fn qfp_decide(
    inst: &QfpInstance,
    witness: Option<&PhaseAssignment>,
) -> Result<Verdict, SolverError> {
    if let Some(w) = witness {
        if let Some((h, _)) = phase_violation(inst, w)? {
            return Err(SolverError::InvalidWitness { h });
        }
    }
    let sys = build_mod4_system(inst)?;
    match solve_mod4(&sys) {
        SolveOutcome::Solution(x) => {
            let r: Vec<i64> = x.iter().map(|&v| i64::from(v)).collect();
            Ok(Verdict::FourthRootSolution(PhaseAssignment::from_integers(&r)))
        }
        SolveOutcome::Contradiction(certificate) => Ok(match witness {
            Some(w) => Verdict::Counterexample { witness: w.clone(), certificate },
            None => Verdict::NoRealWitnessProvided { certificate },
        }),
    }
}
