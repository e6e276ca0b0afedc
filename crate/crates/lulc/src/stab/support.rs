//! Equal-magnitude superpositions over a linear support: the state
//! Σ_{x∈S} ω^{φ(x)} |x⟩ with ω = exp(iπ/4), stored as the support subspace
//! plus the exponent of every span element. All state-level checks in the
//! pipeline run on these 2^d amplitudes, never on the full 2^n vector.

use std::collections::HashMap;

use crate::f2::{solve_f2, BitVec, Subspace};
use crate::solver::QfpInstance;
use crate::stab::tableau::{PauliGen, StabError, StabilizerTableau};

/// A superposition Σ ω^{amps[h]} |x^h⟩ over the span of `support`,
/// normalized so the zero vector carries exponent 0.
#[derive(Clone, Debug)]
pub struct SupportState {
    support: Subspace,
    amps: Vec<u8>, // ω-exponent mod 8, indexed by span counter h
}

impl SupportState {
    /// The plain (all +1) or (−1)^{Q(x)}-phased superposition over S.
    #[must_use]
    pub fn from_instance(inst: &QfpInstance, with_phases: bool) -> Self {
        let support = inst.subspace().clone();
        let amps = support
            .span()
            .expect("instance rank is within the span bound")
            .map(|(_, x)| {
                if with_phases {
                    4 * u8::from(inst.form().eval_terms(&x))
                } else {
                    0
                }
            })
            .collect();
        Self { support, amps }
    }

    /// Reconstruct the supported superposition a tableau stabilizes.
    ///
    /// The X-parts are brought to reduced form by generator products; the
    /// leftover pure-Z generators must carry phase +1, otherwise the state
    /// sits on a shifted (affine) support, which is out of scope here.
    pub fn from_tableau(t: &StabilizerTableau) -> Result<Self, StabError> {
        let n = t.n();
        let mut gens = t.gens().to_vec();
        let mut pivot_of: Vec<(usize, usize)> = Vec::new(); // (column, generator)
        let mut is_pivot = vec![false; gens.len()];
        for col in 0..n {
            let Some(pg) = (0..gens.len()).find(|&i| !is_pivot[i] && gens[i].x.get(col)) else {
                continue;
            };
            let pivot_row = gens[pg].clone();
            for (i, g) in gens.iter_mut().enumerate() {
                if i != pg && g.x.get(col) {
                    *g = g.mul(&pivot_row);
                }
            }
            is_pivot[pg] = true;
            pivot_of.push((col, pg));
        }
        for (i, g) in gens.iter().enumerate() {
            if is_pivot[i] {
                continue;
            }
            debug_assert!(g.x.is_zero());
            if g.phase % 4 == 2 {
                return Err(StabError::AffineSupport);
            }
            debug_assert_eq!(g.phase % 4, 0, "pure-Z phase parity");
        }

        let basis: Vec<BitVec> = pivot_of.iter().map(|&(_, i)| gens[i].x.clone()).collect();
        let support = Subspace::new(n, basis).expect("pivot X-parts are independent");
        let d = support.dim();
        let mut amps = vec![0u8; 1 << d];
        for (h, x) in support.span()? {
            if h == 0 {
                continue;
            }
            let k = h.trailing_zeros() as usize;
            let prev_h = h ^ (1 << k);
            let (_, pg) = pivot_of[k];
            let g = &gens[pg];
            let x_prev = x.xor(&g.x);
            // g |x_prev⟩ = i^p (−1)^{z·x_prev} |x⟩ forces the exponent step
            amps[h as usize] = (amps[prev_h as usize]
                + 2 * g.phase
                + 4 * u8::from(g.z.dot(&x_prev)))
                % 8;
        }
        let state = Self { support, amps };
        debug_assert!(state.stabilized_by(t), "valid tableau must stabilize its own state");
        Ok(state)
    }

    #[must_use]
    pub fn support(&self) -> &Subspace {
        &self.support
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    /// ω-exponent of span element h.
    pub fn amp(&self, h: u64) -> u8 {
        self.amps[h as usize]
    }

    /// Exact check that every generator of `t` fixes this superposition:
    /// X-parts must permute the support and the exponents must track
    /// i^{p} (−1)^{z·x} exactly.
    pub fn stabilized_by(&self, t: &StabilizerTableau) -> bool {
        if t.n() != self.support.ambient() {
            return false;
        }
        let index: HashMap<BitVec, u64> = self
            .support
            .span()
            .expect("span bound checked at construction")
            .map(|(h, x)| (x, h))
            .collect();
        for g in t.gens() {
            for (h, x) in self.support.span().expect("span bound") {
                let y = x.xor(&g.x);
                let Some(&hy) = index.get(&y) else {
                    return false;
                };
                let expect = (self.amps[h as usize] + 2 * g.phase + 4 * u8::from(g.z.dot(&x))) % 8;
                if self.amps[hy as usize] != expect {
                    return false;
                }
            }
        }
        true
    }

    /// Multiply each amplitude by ω^{Σ_j e_j x_j}: the action of the
    /// diagonal layer diag(1, ω^{e_j}) per position.
    #[must_use]
    pub fn phase_multiplied(&self, e: &[i64]) -> Self {
        assert_eq!(e.len(), self.support.ambient(), "exponent width mismatch");
        let mut amps = self.amps.clone();
        for (h, x) in self.support.span().expect("span bound") {
            let add: i64 = x.ones().map(|j| e[j]).sum();
            amps[h as usize] = ((i64::from(amps[h as usize]) + add).rem_euclid(8)) as u8;
        }
        Self { support: self.support.clone(), amps }
    }

    /// Same support and identical normalized amplitudes.
    pub fn same_state(&self, other: &Self) -> bool {
        if self.support.ambient() != other.support.ambient()
            || self.dim() != other.dim()
        {
            return false;
        }
        let mine: HashMap<BitVec, u8> = self
            .support
            .span()
            .expect("span bound")
            .map(|(h, x)| (x, self.amps[h as usize]))
            .collect();
        other
            .support
            .span()
            .expect("span bound")
            .all(|(h, x)| mine.get(&x) == Some(&other.amps[h as usize]))
    }

    /// Rebuild a stabilizer tableau for a ±1-phased superposition: every
    /// exponent must be 0 or 4, and the sign function must be quadratic
    /// over the span, otherwise the state is not a stabilizer state of the
    /// supported form.
    pub fn to_tableau(&self) -> Result<StabilizerTableau, StabError> {
        let d = self.dim();
        let n = self.support.ambient();
        if self.amps.iter().any(|&a| a != 0 && a != 4) {
            return Err(StabError::NotStabilizerForm);
        }
        let b: Vec<u8> = self.amps.iter().map(|&a| a / 4).collect();

        let basis_matrix = self.support.basis_matrix();
        let mut gens = Vec::with_capacity(n);
        for k in 0..d {
            let step = 1usize << k;
            let delta = |h: usize| b[h ^ step] ^ b[h];
            let c0 = delta(0);
            let coeffs: Vec<u8> = (0..d).map(|m| delta(1 << m) ^ c0).collect();
            // the step difference must be affine in h, or the sign function
            // is not quadratic
            for h in 0..(1usize << d) {
                let mut expect = c0;
                for (m, &cm) in coeffs.iter().enumerate() {
                    if (h >> m) & 1 == 1 {
                        expect ^= cm;
                    }
                }
                if delta(h) != expect {
                    return Err(StabError::NotStabilizerForm);
                }
            }
            let mut target = BitVec::zeros(d);
            for (m, &cm) in coeffs.iter().enumerate() {
                if cm == 1 {
                    target.set(m, true);
                }
            }
            let (zeta, _) = solve_f2(&basis_matrix, &target)
                .expect("basis rows are independent, so the system is consistent");
            gens.push(PauliGen::new(self.support.basis()[k].clone(), zeta, 2 * c0));
        }
        for y in basis_matrix.kernel().basis() {
            gens.push(PauliGen::new(BitVec::zeros(n), y.clone(), 0));
        }
        let t = StabilizerTableau::new(n, gens)?;
        debug_assert!(self.stabilized_by(&t));
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::published_instance;
    use crate::quadform::QuadraticForm;
    use crate::stab::tableau::tableau_from_instance;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn roundtrip_instance_tableau_state() {
        let (inst, _) = published_instance();
        for phased in [false, true] {
            let t = tableau_from_instance(&inst, phased).unwrap();
            let direct = SupportState::from_instance(&inst, phased);
            let recovered = SupportState::from_tableau(&t).unwrap();
            assert!(direct.same_state(&recovered), "phased = {phased}");
        }
    }

    #[test]
    fn published_phase_multiplication_reaches_phased_state() {
        let (inst, w) = published_instance();
        let e = w.octal().unwrap();
        let plain = SupportState::from_instance(&inst, false);
        let phased = SupportState::from_instance(&inst, true);
        assert!(plain.phase_multiplied(&e).same_state(&phased));
    }

    #[test]
    fn rebuilt_tableau_matches_directly_built_group() {
        let (inst, w) = published_instance();
        let e = w.octal().unwrap();
        let plain = SupportState::from_instance(&inst, false);
        let rebuilt = plain.phase_multiplied(&e).to_tableau().unwrap();
        let phased = tableau_from_instance(&inst, true).unwrap();
        assert!(rebuilt.same_group(&phased));
    }

    #[test]
    fn odd_single_exponent_is_not_stabilizer_form() {
        // multiplying only one position by ω leaves exponents outside {0,4}
        let s = Subspace::new(2, vec![bv("11")]).unwrap();
        let inst = QfpInstance::new(s, QuadraticForm::zero(2)).unwrap();
        let state = SupportState::from_instance(&inst, false);
        let mut e = vec![0i64; 2];
        e[0] = 1;
        assert_eq!(
            state.phase_multiplied(&e).to_tableau().unwrap_err(),
            StabError::NotStabilizerForm
        );
    }

    #[test]
    fn affine_support_detected() {
        // Z generator with phase 2 pins x_0 = 1: an affine support
        let gens = vec![PauliGen::new(bv("0"), bv("1"), 2)];
        let t = StabilizerTableau::new(1, gens).unwrap();
        assert_eq!(SupportState::from_tableau(&t).unwrap_err(), StabError::AffineSupport);
    }
}
