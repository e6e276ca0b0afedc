//! Randomized generation of rank-6 counterexample instances: sample s₀,
//! round it to s₁ for more integral entries, cancel those entries with an
//! edge-count vector e, assemble the instance by deleting canceled
//! positions, and verify the result end to end.
//!
//! Also hosts the published 27-position instance used by the regression
//! pipeline.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::f2::{BitVec, F2Error, Subspace};
use crate::mat::Rat;
use crate::patterns::{build_g, PairIndexer, Pattern, PatternError};
use crate::phase::{rat_mod4, PhaseAssignment};
use crate::quadform::{QuadFormError, QuadraticForm};
use crate::solver::{
    phase_check, qfp_decide, ContradictionCert, QfpInstance, SolverError, Verdict,
};

/// The only rank for which the generator applies: ranks up to 5 provably
/// admit no counterexample and larger ranks are out of scope.
pub const FORGE_RANK: usize = 6;

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("generation requires d = 6: ranks up to 5 admit no counterexample, larger ranks are unsupported")]
    UnsupportedRank(usize),
    #[error("all phase entries vanish mod 4; nothing to assemble")]
    EmptyInstance,
    #[error("edge selection touches deleted pattern {0}")]
    InconsistentSelection(u32),
    #[error("internal: rounding identity G[8G⁻¹s₀] ≡ 0 (mod 8) violated")]
    RoundingIdentity,
    #[error("internal: assembled candidate fails its own phase identity")]
    KeyEquation,
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

// ---------------------------------------------------------------------------
// Published instance (27 positions, rank 6)
// ---------------------------------------------------------------------------

/// Basis rows of the published subspace, position 1 leftmost.
pub const PUBLISHED_BASIS: [&str; 6] = [
    "100010001010101010100011110",
    "101010111001100000001010101",
    "011001100111100111100110011",
    "000111100000011001100001111",
    "000000011111111000011111111",
    "000000000000000111111111111",
];

/// The eleven quadratic terms, 1-based position pairs.
pub const PUBLISHED_TERMS: [(usize, usize); 11] = [
    (1, 2),
    (1, 3),
    (1, 8),
    (2, 4),
    (2, 8),
    (2, 16),
    (3, 4),
    (3, 8),
    (3, 16),
    (4, 8),
    (8, 16),
];

/// The published octal exponents: c_j = exp(iπ e_j / 4).
pub const PUBLISHED_EXPONENTS: [i64; 27] = [
    3, 5, 7, 5, 1, 3, 5, 7, 1, 3, 5, 5, 3, 7, 3, 3, 7, 1, 7, 3, 1, 5, 5, 5, 3, 5, 3,
];

/// The published subspace basis as a checked [`Subspace`].
#[must_use]
pub fn published_basis() -> Subspace {
    let rows: Vec<BitVec> = PUBLISHED_BASIS
        .iter()
        .map(|s| s.parse().expect("valid bit string"))
        .collect();
    Subspace::new(27, rows).expect("independent rows")
}

/// The published quadratic form.
#[must_use]
pub fn published_form() -> QuadraticForm {
    QuadraticForm::from_edges(27, PUBLISHED_TERMS.iter().map(|&(i, j)| (i - 1, j - 1)))
        .expect("valid terms")
}

/// The published octal exponent vector.
#[must_use]
pub fn published_exponents() -> Vec<i64> {
    PUBLISHED_EXPONENTS.to_vec()
}

/// The published counterexample instance and its phase witness.
#[must_use]
pub fn published_instance() -> (QfpInstance, PhaseAssignment) {
    let inst = QfpInstance::new(published_basis(), published_form()).expect("valid published instance");
    (inst, PhaseAssignment::from_octal(&PUBLISHED_EXPONENTS))
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

/// Rounding step at d = 6: with u = [8G⁻¹s₀] the identity
/// G·u ≡ 0 (mod 8) holds, and s₁ = G·u/8 satisfies 4G⁻¹s₁ = u/2, which
/// generally has more integral entries than 4G⁻¹s₀.
pub fn round_s(d: usize, s0: &[i64]) -> Result<Vec<i64>, ForgeError> {
    Ok(round_details(d, s0)?.1)
}

/// Returns (u, s₁) with u = [8G⁻¹s₀] and s₁ = G·u/8.
fn round_details(d: usize, s0: &[i64]) -> Result<(Vec<i64>, Vec<i64>), ForgeError> {
    if d != FORGE_RANK {
        return Err(ForgeError::UnsupportedRank(d));
    }
    let m = (1usize << d) - 1;
    assert_eq!(s0.len(), m, "s0 has wrong length");
    let g = build_g(d)?;
    // 8G⁻¹ = (16/D)(2G − J) = (2G − J)/4 at D = 64; all integer arithmetic.
    let total: i64 = s0.iter().sum();
    let mut u = Vec::with_capacity(m);
    for i in 0..m {
        let w = 2 * g.row(i).iter().zip(s0).map(|(&a, &b)| a * b).sum::<i64>() - total;
        u.push(w.div_euclid(4));
    }
    let gu = g.mul_vec(&u);
    if gu.iter().any(|&v| v.rem_euclid(8) != 0) {
        return Err(ForgeError::RoundingIdentity);
    }
    let s1 = gu.into_iter().map(|v| v / 8).collect();
    Ok((u, s1))
}

/// 4G⁻¹s as exact rationals: (8/D)(2G − J)·s.
pub fn four_ginv(d: usize, s: &[i64]) -> Result<Vec<Rat>, ForgeError> {
    if d == 0 || d > 8 {
        return Err(ForgeError::Pattern(PatternError::RankOutOfRange(d)));
    }
    let m = (1usize << d) - 1;
    assert_eq!(s.len(), m, "s has wrong length");
    let g = build_g(d)?;
    let total: i64 = s.iter().sum();
    let dd = 1i64 << d;
    Ok((0..m)
        .map(|i| {
            let w = 2 * g.row(i).iter().zip(s).map(|(&a, &b)| a * b).sum::<i64>() - total;
            Rat::new(8 * w, dd)
        })
        .collect())
}

/// Pick e to cancel the integral entries of `frac` mod 4: for every
/// integral entry i, pairs (j,k) with j⊕k = i and j,k non-integral
/// contribute −1 each through the closed form, so selecting
/// frac_i mod 4 of them drives r_i ≡ 0 (mod 4). Pairs touching an
/// integral-entry pattern are never used. `None` when some target has too
/// few usable pairs; the caller retries with a fresh sample.
pub fn choose_e(d: usize, frac: &[Rat]) -> Option<Vec<i64>> {
    let pairs = PairIndexer::new(d).ok()?;
    let m = pairs.num_patterns();
    assert_eq!(frac.len(), m, "frac has wrong length");
    let integral: Vec<bool> = frac.iter().map(|v| v.is_integer()).collect();
    let mut cross = vec![0i64; pairs.num_pairs()];
    for i in 0..m {
        if !integral[i] {
            continue;
        }
        let target = Pattern::from_index(i);
        let needed = frac[i].to_integer().rem_euclid(4) as usize;
        if needed == 0 {
            continue;
        }
        let usable: Vec<(Pattern, Pattern)> = pairs
            .pairs_xoring_to(target)
            .into_iter()
            .filter(|&(j, k)| !integral[j.index()] && !integral[k.index()])
            .collect();
        if usable.len() < needed {
            return None;
        }
        for &(j, k) in usable.iter().take(needed) {
            cross[pairs.col(j, k)] = 1;
        }
    }
    Some(cross)
}

/// A fully assembled candidate with all intermediate data retained.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub d: usize,
    pub s0: Vec<i64>,
    pub s1: Vec<i64>,
    /// Exact r = 2G⁻¹T e + 4G⁻¹ s₁, indexed by pattern.
    pub r: Vec<Rat>,
    /// Cross-class edge counts, pair-indexed.
    pub e: Vec<i64>,
    /// Patterns with r ≢ 0 (mod 4), increasing; these become positions.
    pub kept: Vec<Pattern>,
    pub instance: QfpInstance,
    pub witness: PhaseAssignment,
}

/// A candidate whose witness verifies and whose mod-4 system contradicts.
#[derive(Clone, Debug)]
pub struct VerifiedCounterexample {
    pub candidate: Candidate,
    pub certificate: ContradictionCert,
    /// 1-based iteration at which the hit occurred.
    pub iteration: u64,
}

/// Build the instance determined by a pattern-indexed phase vector r and a
/// pair-indexed edge selection e: positions are the patterns with r ≠ 0 in
/// increasing order (basis column m = binary expansion of m), Q has one
/// edge per selected pair, and the witness is r restricted to the kept
/// positions, reduced mod 4. The search loop reduces r mod 4 before calling
/// this, so canceled positions are really deleted there.
///
/// S is the row space of the column-deleted pattern matrix; when the kept
/// columns do not span all d directions the basis is reduced, so the
/// instance rank can drop below d.
pub fn assemble_instance(
    d: usize,
    r: &[Rat],
    e: &[i64],
) -> Result<(QfpInstance, PhaseAssignment), ForgeError> {
    let pairs = PairIndexer::new(d)?;
    assert_eq!(r.len(), pairs.num_patterns(), "r has wrong length");
    assert_eq!(e.len(), pairs.num_pairs(), "e has wrong length");

    let kept: Vec<Pattern> = (0..r.len())
        .filter(|&i| r[i] != Rat::from_integer(0))
        .map(Pattern::from_index)
        .collect();
    if kept.is_empty() {
        return Err(ForgeError::EmptyInstance);
    }
    let mut position_of = vec![usize::MAX; pairs.num_patterns()];
    for (pos, m) in kept.iter().enumerate() {
        position_of[m.index()] = pos;
    }

    let n = kept.len();
    let mut rows = vec![BitVec::zeros(n); d];
    for (pos, m) in kept.iter().enumerate() {
        for (k, row) in rows.iter_mut().enumerate() {
            if m.bit(k) {
                row.set(pos, true);
            }
        }
    }
    let s = match Subspace::new(n, rows.clone()) {
        Ok(s) => s,
        Err(F2Error::DependentBasis { .. }) => Subspace::from_spanning(n, rows),
        Err(other) => return Err(ForgeError::F2(other)),
    };

    let mut edges = Vec::new();
    for c in 0..e.len() {
        let count = e[c];
        if count == 0 {
            continue;
        }
        let (j, k) = pairs.pair(c);
        let (pj, pk) = (position_of[j.index()], position_of[k.index()]);
        if pj == usize::MAX {
            return Err(ForgeError::InconsistentSelection(j.value()));
        }
        if pk == usize::MAX {
            return Err(ForgeError::InconsistentSelection(k.value()));
        }
        debug_assert_eq!(count, 1, "singleton classes admit at most one edge per pair");
        edges.push((pj, pk));
    }
    let q = QuadraticForm::from_edges(n, edges)?;

    let witness =
        PhaseAssignment::from_rationals(kept.iter().map(|m| rat_mod4(r[m.index()])).collect());
    let instance = QfpInstance::new(s, q)?;
    if !phase_check(&instance, &witness)? {
        return Err(ForgeError::KeyEquation);
    }
    Ok((instance, witness))
}

/// One backward pass: s₀ → s₁ → e → (r, instance, witness). `None` when the
/// edge selection or the rank condition fails; both are retried upstream.
pub fn candidate_from_s0(d: usize, s0: &[i64]) -> Result<Option<Candidate>, ForgeError> {
    let (u, s1) = round_details(d, s0)?;
    // 4G⁻¹s₁ = u/2 exactly.
    let frac: Vec<Rat> = u.iter().map(|&v| Rat::new(v, 2)).collect();
    let Some(e) = choose_e(d, &frac) else {
        return Ok(None);
    };
    let pairs = PairIndexer::new(d)?;
    let mut r = frac;
    for c in 0..e.len() {
        if e[c] == 0 {
            continue;
        }
        let (j, k) = pairs.pair(c);
        let x = j.xor(k).expect("distinct patterns");
        r[j.index()] += Rat::from_integer(e[c]);
        r[k.index()] += Rat::from_integer(e[c]);
        r[x.index()] -= Rat::from_integer(e[c]);
    }
    // phases only matter mod 4: canceled positions become exact zeros
    let reduced: Vec<Rat> = r.iter().map(|&v| rat_mod4(v)).collect();
    match assemble_instance(d, &reduced, &e) {
        Ok((instance, witness)) => {
            // ranks below d provably admit no counterexample; skip early
            if instance.rank() != d {
                return Ok(None);
            }
            let kept = (0..reduced.len())
                .filter(|&i| reduced[i] != Rat::from_integer(0))
                .map(Pattern::from_index)
                .collect();
            Ok(Some(Candidate {
                d,
                s0: s0.to_vec(),
                s1,
                r,
                e,
                kept,
                instance,
                witness,
            }))
        }
        Err(ForgeError::EmptyInstance) => Ok(None),
        Err(other) => Err(other),
    }
}

fn sample_s0(rng: &mut ChaCha8Rng, m: usize) -> Vec<i64> {
    (0..m).map(|_| rng.gen_range(0..=63)).collect()
}

/// Sequential search: deterministic given (seed, max_iters). Returns the
/// first candidate whose witness verifies and whose mod-4 system
/// contradicts, or `None` when the budget runs out.
pub fn search(
    d: usize,
    seed: u64,
    max_iters: u64,
) -> Result<Option<VerifiedCounterexample>, ForgeError> {
    if d != FORGE_RANK {
        return Err(ForgeError::UnsupportedRank(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (1usize << d) - 1;
    for iteration in 1..=max_iters {
        let s0 = sample_s0(&mut rng, m);
        if let Some(hit) = try_candidate(d, &s0, iteration)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

fn try_candidate(
    d: usize,
    s0: &[i64],
    iteration: u64,
) -> Result<Option<VerifiedCounterexample>, ForgeError> {
    let Some(candidate) = candidate_from_s0(d, s0)? else {
        return Ok(None);
    };
    match qfp_decide(&candidate.instance, Some(&candidate.witness))? {
        Verdict::Counterexample { certificate, .. } => Ok(Some(VerifiedCounterexample {
            candidate,
            certificate,
            iteration,
        })),
        // mod-4 solvable: not a counterexample, discard silently
        _ => Ok(None),
    }
}

/// Racing parallel search: worker w runs the sequential loop with seed ⊕ w;
/// the first verified result wins, so output may vary across runs. The
/// sequential mode is the deterministic reference.
pub fn search_parallel(
    d: usize,
    seed: u64,
    max_iters: u64,
    workers: usize,
) -> Result<Option<VerifiedCounterexample>, ForgeError> {
    if d != FORGE_RANK {
        return Err(ForgeError::UnsupportedRank(d));
    }
    let workers = workers.max(1);
    if workers == 1 {
        return search(d, seed, max_iters);
    }
    let per_worker = max_iters.div_ceil(workers as u64);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<Result<VerifiedCounterexample, ForgeError>>();
    std::thread::scope(|scope| {
        for w in 0..workers {
            let tx = tx.clone();
            let stop = &stop;
            scope.spawn(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ w as u64);
                let m = (1usize << d) - 1;
                for iteration in 1..=per_worker {
                    if stop.load(Ordering::Relaxed) {
                        return;
                    }
                    let s0 = sample_s0(&mut rng, m);
                    match try_candidate(d, &s0, iteration) {
                        Ok(Some(hit)) => {
                            stop.store(true, Ordering::Relaxed);
                            let _ = tx.send(Ok(hit));
                            return;
                        }
                        Ok(None) => {}
                        Err(err) => {
                            stop.store(true, Ordering::Relaxed);
                            let _ = tx.send(Err(err));
                            return;
                        }
                    }
                }
            });
        }
        drop(tx);
        match rx.recv() {
            Ok(first) => {
                stop.store(true, Ordering::Relaxed);
                first.map(Some)
            }
            Err(_) => Ok(None), // all workers exhausted their budget
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::partition_positions;
    use crate::phase::rat_is_zero_mod4;
    use crate::solver::{build_mod4_system, SolveOutcome};

    #[test]
    fn builtin_instance_shape() {
        let (inst, w) = published_instance();
        assert_eq!(inst.n(), 27);
        assert_eq!(inst.rank(), 6);
        assert_eq!(inst.subspace().span().unwrap().count(), 64);
        assert_eq!(inst.form().edges().len(), 11);
        assert_eq!(w.octal(), Some(PUBLISHED_EXPONENTS.to_vec()));
        // the orthogonal directions: 27 − 6 of them
        assert_eq!(inst.subspace().basis_matrix().kernel().dim(), 21);
    }

    #[test]
    fn search_hits_come_in_the_two_known_sizes() {
        for seed in 0..6u64 {
            let hit = search(6, seed, 1000).unwrap().expect("hit within 1000 draws");
            let n = hit.candidate.instance.n();
            assert!(n == 27 || n == 35, "unexpected instance size {n}");
        }
    }

    #[test]
    fn builtin_span_elements_are_distinct() {
        let (inst, _) = published_instance();
        let xs: std::collections::HashSet<String> = inst
            .subspace()
            .span()
            .unwrap()
            .map(|(_, x)| x.to_string())
            .collect();
        assert_eq!(xs.len(), 64);
    }

    #[test]
    fn round_s_zero_stays_zero() {
        assert_eq!(round_s(6, &[0; 63]).unwrap(), vec![0; 63]);
    }

    #[test]
    fn round_s_rejects_other_ranks() {
        assert!(matches!(round_s(5, &[0; 31]), Err(ForgeError::UnsupportedRank(5))));
    }

    #[test]
    fn rounding_identity_holds_for_random_s0() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let g = build_g(6).unwrap();
        for _ in 0..200 {
            let s0 = sample_s0(&mut rng, 63);
            let (u, s1) = round_details(6, &s0).unwrap();
            // the identity itself
            let gu = g.mul_vec(&u);
            assert!(gu.iter().all(|&v| v.rem_euclid(8) == 0));
            // and the congruence (1/2)u ≡ 4G⁻¹s₁ (mod 4): here it is exact
            let back = four_ginv(6, &s1).unwrap();
            for (ui, bi) in u.iter().zip(&back) {
                assert_eq!(Rat::new(*ui, 2), *bi);
            }
        }
    }

    #[test]
    fn rounding_gains_integral_entries_on_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut before = 0usize;
        let mut after = 0usize;
        for _ in 0..150 {
            let s0 = sample_s0(&mut rng, 63);
            let frac0 = four_ginv(6, &s0).unwrap();
            let (u, _) = round_details(6, &s0).unwrap();
            before += frac0.iter().filter(|v| v.is_integer()).count();
            after += u.iter().filter(|v| v.rem_euclid(2) == 0).count();
        }
        assert!(
            after >= before,
            "rounding lost integral entries on average: {after} < {before}"
        );
    }

    #[test]
    fn choose_e_trivial_when_nothing_integral() {
        let frac: Vec<Rat> = (0..63).map(|_| Rat::new(1, 2)).collect();
        let e = choose_e(6, &frac).unwrap();
        assert!(e.iter().all(|&v| v == 0));
    }

    #[test]
    fn choose_e_single_target() {
        // one integral entry needing a single -1 contribution mod 4
        let mut frac: Vec<Rat> = (0..63).map(|_| Rat::new(1, 2)).collect();
        frac[0] = Rat::from_integer(1); // pattern value 1, needs 1 pair
        let e = choose_e(6, &frac).unwrap();
        let pairs = PairIndexer::new(6).unwrap();
        let selected: Vec<(Pattern, Pattern)> = (0..e.len())
            .filter(|&c| e[c] != 0)
            .map(|c| pairs.pair(c))
            .collect();
        assert_eq!(selected.len(), 1);
        let (j, k) = selected[0];
        assert_eq!(j.value() ^ k.value(), 1);
        // closed-form effect on the target row is -1 ≡ frac mod 4 cancel
        let mut r0 = frac[0];
        r0 -= Rat::from_integer(1);
        assert!(rat_is_zero_mod4(r0));
    }

    #[test]
    fn choose_e_fails_when_no_pairs_left() {
        // every pattern integral: no usable pairs for a nonzero residue
        let mut frac: Vec<Rat> = (0..63).map(|_| Rat::from_integer(0)).collect();
        frac[0] = Rat::from_integer(1);
        assert!(choose_e(6, &frac).is_none());
    }

    #[test]
    fn candidate_key_equation_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let g = build_g(6).unwrap();
        let t = crate::patterns::build_t(6).unwrap();
        let mut produced = 0;
        for _ in 0..40 {
            let s0 = sample_s0(&mut rng, 63);
            let Some(c) = candidate_from_s0(6, &s0).unwrap() else { continue };
            produced += 1;
            // G r ≡ 2 T e (mod 4), exact rationals
            let te = t.mul_vec(&c.e);
            for i in 0..63 {
                let mut lhs = Rat::from_integer(0);
                for j in 0..63 {
                    lhs += Rat::from_integer(g.at(i, j)) * c.r[j];
                }
                assert!(rat_is_zero_mod4(lhs - Rat::from_integer(2 * te[i])));
            }
            // kept = exactly the non-integral-entry patterns
            assert_eq!(c.kept.len(), c.instance.n());
            assert!(phase_check(&c.instance, &c.witness).unwrap());
            // no duplicate basis columns by construction
            let p = partition_positions(c.instance.subspace()).unwrap();
            assert!(p.all_singletons());
        }
        assert!(produced > 0, "no candidate assembled in 40 draws");
    }

    #[test]
    fn published_instance_reassembles_from_its_phase_vector() {
        // place e_j/2 at the pattern of position j, zero elsewhere
        let s = published_basis();
        let q = published_form();
        let mut r = vec![Rat::from_integer(0); 63];
        let p = partition_positions(&s).unwrap();
        for j in 0..27 {
            r[p.pattern_of(j).index()] = Rat::new(PUBLISHED_EXPONENTS[j], 2);
        }
        let ev = q.e_vector(&p).unwrap();
        let (inst, w) = assemble_instance(6, &r, ev.cross_entries()).unwrap();
        assert_eq!(inst.subspace(), &s);
        assert_eq!(inst.form(), &q);
        assert_eq!(w.octal(), Some(PUBLISHED_EXPONENTS.to_vec()));
    }

    #[test]
    fn assemble_single_position() {
        // r = 4 at one pattern solves G r ≡ 0 (mod 4); the witness phase is
        // trivial but the position itself is kept.
        let mut r = vec![Rat::from_integer(0); 63];
        r[4] = Rat::from_integer(4); // pattern value 5
        let e = vec![0; PairIndexer::new(6).unwrap().num_pairs()];
        let (inst, w) = assemble_instance(6, &r, &e).unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.rank(), 1);
        assert!(inst.form().edges().is_empty());
        assert_eq!(w.entries(), &[Rat::from_integer(0)]);
    }

    #[test]
    fn assemble_rejects_edge_on_deleted_pattern() {
        let mut r = vec![Rat::from_integer(0); 63];
        r[0] = Rat::from_integer(1);
        r[1] = Rat::from_integer(1);
        let pairs = PairIndexer::new(6).unwrap();
        let mut e = vec![0; pairs.num_pairs()];
        // the pair (1,2) xors to 3, whose r entry is 0 mod 4 -> ok positions,
        // but select a pair touching the deleted pattern 4 instead
        e[pairs.col(Pattern::new(1), Pattern::new(4))] = 1;
        assert!(matches!(
            assemble_instance(6, &r, &e),
            Err(ForgeError::InconsistentSelection(4))
        ));
    }

    #[test]
    fn assemble_rejects_all_zero() {
        let r = vec![Rat::from_integer(0); 63];
        let e = vec![0; PairIndexer::new(6).unwrap().num_pairs()];
        assert!(matches!(assemble_instance(6, &r, &e), Err(ForgeError::EmptyInstance)));
    }

    #[test]
    fn search_is_deterministic() {
        let a = search(6, 12345, 40).unwrap();
        let b = search(6, 12345, 40).unwrap();
        match (a, b) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                assert_eq!(x.iteration, y.iteration);
                assert_eq!(x.candidate.s0, y.candidate.s0);
                assert_eq!(x.candidate.r, y.candidate.r);
            }
            _ => panic!("same seed produced different outcomes"),
        }
    }

    #[test]
    fn search_rejects_d5() {
        assert!(matches!(search(5, 1, 10), Err(ForgeError::UnsupportedRank(5))));
    }

    #[test]
    fn search_finds_verified_counterexample() {
        let hit = search(6, 1, 20_000)
            .unwrap()
            .expect("budget should suffice at d = 6");
        let sys = build_mod4_system(&hit.candidate.instance).unwrap();
        assert!(hit.certificate.replay(&sys));
        assert!(matches!(crate::solver::solve_mod4(&sys), SolveOutcome::Contradiction(_)));
        assert!(phase_check(&hit.candidate.instance, &hit.candidate.witness).unwrap());
    }

    #[test]
    fn parallel_search_returns_verified_hit() {
        let hit = search_parallel(6, 5, 4000, 3).unwrap().expect("hit");
        assert!(phase_check(&hit.candidate.instance, &hit.candidate.witness).unwrap());
        let sys = build_mod4_system(&hit.candidate.instance).unwrap();
        assert!(hit.certificate.replay(&sys));
    }
}
