//! Stabilizer tableaux in binary-symplectic form with exact ℤ₄ phase
//! tracking: generator = i^{phase} · X(x) · Z(z), stored in that canonical
//! order per site (so Y appears as phase 1 with x = z = 1).

use thiserror::Error;

use crate::f2::{solve_f2, BitMatrix, BitVec, F2Error};
use crate::phase::PhaseAssignment;
use crate::solver::QfpInstance;
use crate::stab::support::SupportState;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabError {
    #[error("generator {index} has phase parity {phase} but X/Z overlap parity {overlap}; the group would contain -I")]
    PhaseParity { index: usize, phase: u8, overlap: u8 },
    #[error("generators {0} and {1} anticommute")]
    NonCommuting(usize, usize),
    #[error("generators are dependent: rank {rank} < {expected}")]
    DependentGenerators { rank: usize, expected: usize },
    #[error("expected {expected} generators on {expected} qubits, got {got}")]
    GeneratorCount { expected: usize, got: usize },
    #[error("tableau supports an affine (shifted) superposition; only linear supports are handled")]
    AffineSupport,
    #[error("phase assignment is not octal (some 2·r_j is not an integer)")]
    UnsupportedPhase,
    #[error("the transformed state is not a ±1-phased stabilizer superposition")]
    NotStabilizerForm,
    #[error("tableaux act on different qubit counts: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("local-Clifford search explored {explored} nodes without a decision")]
    SearchOverflow { explored: u64 },
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// One Pauli group element: i^{phase} · X(x) · Z(z), phase mod 4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PauliGen {
    pub x: BitVec,
    pub z: BitVec,
    pub phase: u8,
}

impl PauliGen {
    pub fn new(x: BitVec, z: BitVec, phase: u8) -> Self {
        assert_eq!(x.len(), z.len(), "X and Z parts differ in length");
        Self { x, z, phase: phase % 4 }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self::new(BitVec::zeros(n), BitVec::zeros(n), 0)
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.x.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Group product with exact phase: moving X(x₂) past Z(z₁) costs
    /// (−1)^{z₁·x₂}.
    #[must_use]
    pub fn mul(&self, other: &Self) -> Self {
        let phase = (self.phase + other.phase + 2 * u8::from(self.z.dot(&other.x))) % 4;
        Self { x: self.x.xor(&other.x), z: self.z.xor(&other.z), phase }
    }

    /// Symplectic commutation test.
    #[must_use]
    pub fn commutes(&self, other: &Self) -> bool {
        !(self.x.dot(&other.z) ^ self.z.dot(&other.x))
    }

    /// g² = I requires the phase parity to match the X/Z overlap parity.
    #[must_use]
    pub fn squares_to_identity(&self) -> bool {
        (self.phase & 1) == u8::from(self.x.dot(&self.z))
    }

    /// The site-j factor rendered as one of I, X, Y, Z (+ leftover phase):
    /// (sign exponent contribution, letter).
    fn site_letter(&self, j: usize) -> char {
        match (self.x.get(j), self.z.get(j)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }
}

impl std::fmt::Display for PauliGen {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // render via Y = i X Z: subtract one i per overlap site
        let overlaps = (0..self.len())
            .filter(|&j| self.x.get(j) && self.z.get(j))
            .count() as u8;
        let eff = (self.phase + 4 - (overlaps % 4)) % 4;
        let prefix = match eff {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for j in 0..self.len() {
            write!(f, "{}", self.site_letter(j))?;
        }
        Ok(())
    }
}

/// n independent, pairwise commuting generators on n qubits whose group
/// excludes −I; fixes a unique state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilizerTableau {
    n: usize,
    gens: Vec<PauliGen>,
}

impl StabilizerTableau {
    pub fn new(n: usize, gens: Vec<PauliGen>) -> Result<Self, StabError> {
        if gens.len() != n {
            return Err(StabError::GeneratorCount { expected: n, got: gens.len() });
        }
        for (i, g) in gens.iter().enumerate() {
            assert_eq!(g.len(), n, "generator width mismatch");
            if !g.squares_to_identity() {
                return Err(StabError::PhaseParity {
                    index: i,
                    phase: g.phase,
                    overlap: u8::from(g.x.dot(&g.z)),
                });
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes(&gens[j]) {
                    return Err(StabError::NonCommuting(i, j));
                }
            }
        }
        let rank = BitMatrix::from_rows(gens.iter().map(symplectic_row).collect()).rank();
        if rank != n {
            return Err(StabError::DependentGenerators { rank, expected: n });
        }
        Ok(Self { n, gens })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn gens(&self) -> &[PauliGen] {
        &self.gens
    }

    /// Does the group generated by this tableau contain g (exact phase)?
    pub fn contains(&self, g: &PauliGen) -> bool {
        assert_eq!(g.len(), self.n, "element width mismatch");
        let m = BitMatrix::from_rows(self.gens.iter().map(symplectic_row).collect());
        let Some((combo, _)) = solve_f2(&m.transpose(), &symplectic_row(g)) else {
            return false;
        };
        let mut prod = PauliGen::identity(self.n);
        for i in combo.ones() {
            prod = prod.mul(&self.gens[i]);
        }
        prod == *g
    }

    /// Same stabilizer group, phases included.
    pub fn same_group(&self, other: &StabilizerTableau) -> bool {
        self.n == other.n && other.gens.iter().all(|g| self.contains(g))
    }

    /// Conjugate every generator by H on `qubit`: X↔Z, Y ↦ −Y.
    pub fn apply_h(&mut self, qubit: usize) {
        for g in &mut self.gens {
            let (xb, zb) = (g.x.get(qubit), g.z.get(qubit));
            g.x.set(qubit, zb);
            g.z.set(qubit, xb);
            if xb && zb {
                g.phase = (g.phase + 2) % 4;
            }
        }
    }

    /// Conjugate by the phase gate S = diag(1, i): X ↦ Y, Z fixed.
    pub fn apply_s(&mut self, qubit: usize) {
        for g in &mut self.gens {
            if g.x.get(qubit) {
                g.phase = (g.phase + 1) % 4;
                g.z.flip(qubit);
            }
        }
    }

    /// Conjugate by Z: flips the sign of generators with X on `qubit`.
    pub fn apply_z(&mut self, qubit: usize) {
        for g in &mut self.gens {
            if g.x.get(qubit) {
                g.phase = (g.phase + 2) % 4;
            }
        }
    }

    /// Conjugate by X: flips the sign of generators with Z on `qubit`.
    pub fn apply_x(&mut self, qubit: usize) {
        for g in &mut self.gens {
            if g.z.get(qubit) {
                g.phase = (g.phase + 2) % 4;
            }
        }
    }
}

pub(crate) fn symplectic_row(g: &PauliGen) -> BitVec {
    let n = g.len();
    let mut row = BitVec::zeros(2 * n);
    for i in g.x.ones() {
        row.set(i, true);
    }
    for i in g.z.ones() {
        row.set(n + i, true);
    }
    row
}

/// Tableau of the superposition over S: d X-type generators
/// (−1)^{Q(ξ)} X(ξ) Z(Γξ) for the basis vectors ξ (Γ the adjacency of Q,
/// both dropped for the plain superposition), plus n−d Z-type generators
/// from the kernel of the basis matrix.
pub fn tableau_from_instance(
    inst: &QfpInstance,
    with_phases: bool,
) -> Result<StabilizerTableau, StabError> {
    let n = inst.n();
    let q = inst.form();
    let adj = q.adjacency();
    let mut gens = Vec::with_capacity(n);
    for xi in inst.subspace().basis() {
        if with_phases {
            let z = adj.mul_vec(xi);
            let phase = 2 * u8::from(q.eval_terms(xi));
            gens.push(PauliGen::new(xi.clone(), z, phase));
        } else {
            gens.push(PauliGen::new(xi.clone(), BitVec::zeros(n), 0));
        }
    }
    for y in inst.subspace().basis_matrix().kernel().basis() {
        gens.push(PauliGen::new(BitVec::zeros(n), y.clone(), 0));
    }
    StabilizerTableau::new(n, gens)
}

/// Transform a tableau by the diagonal layer diag(1, exp(iπ e_j/4)) per
/// qubit, e being the octal view of `p`.
///
/// Even exponents form a local Clifford layer (powers of S) and are applied
/// by exact conjugation. Odd exponents leave the Clifford group, where
/// conjugated generators are no longer Pauli words; the transformation is
/// then carried out on the supported superposition itself and a tableau of
/// the resulting state is rebuilt, failing with
/// [`StabError::NotStabilizerForm`] when the result is not a ±1-phased
/// stabilizer state.
pub fn apply_diagonal_phases(
    t: &StabilizerTableau,
    p: &PhaseAssignment,
) -> Result<StabilizerTableau, StabError> {
    assert_eq!(p.len(), t.n(), "phase assignment width mismatch");
    let e = p.octal().ok_or(StabError::UnsupportedPhase)?;
    if e.iter().all(|v| v % 2 == 0) {
        let mut out = t.clone();
        for (j, &ej) in e.iter().enumerate() {
            let s_power = (ej / 2).rem_euclid(4);
            for _ in 0..s_power {
                out.apply_s(j);
            }
        }
        return Ok(out);
    }
    let state = SupportState::from_tableau(t)?.phase_multiplied(&e);
    state.to_tableau()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::Subspace;
    use crate::forge::published_instance;
    use crate::quadform::QuadraticForm;
    use crate::solver::QfpInstance;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn epr_instance() -> QfpInstance {
        let s = Subspace::new(2, vec![bv("11")]).unwrap();
        QfpInstance::new(s, QuadraticForm::zero(2)).unwrap()
    }

    #[test]
    fn epr_tableau_is_xx_zz() {
        let t = tableau_from_instance(&epr_instance(), false).unwrap();
        assert_eq!(t.gens().len(), 2);
        assert_eq!(t.gens()[0].to_string(), "+XX");
        assert_eq!(t.gens()[1].to_string(), "+ZZ");
    }

    #[test]
    fn phased_epr_tableau_is_yy_zz() {
        let s = Subspace::new(2, vec![bv("11")]).unwrap();
        let q = QuadraticForm::from_edges(2, [(0, 1)]).unwrap();
        let inst = QfpInstance::new(s, q).unwrap();
        let t = tableau_from_instance(&inst, true).unwrap();
        // (-1)^{Q(11)} X(11) Z(11) = -(XZ)(XZ) = -(-iY)(-iY) = +YY
        assert_eq!(t.gens()[0].to_string(), "+YY");
        assert_eq!(t.gens()[1].to_string(), "+ZZ");
    }

    #[test]
    fn published_tableaux_stabilize_their_superpositions() {
        let (inst, _) = published_instance();
        let plain = tableau_from_instance(&inst, false).unwrap();
        let phased = tableau_from_instance(&inst, true).unwrap();
        let state_plain = SupportState::from_instance(&inst, false);
        let state_phased = SupportState::from_instance(&inst, true);
        assert!(state_plain.stabilized_by(&plain));
        assert!(state_phased.stabilized_by(&phased));
        // cross: the phased tableau does not stabilize the plain state
        assert!(!state_plain.stabilized_by(&phased));
        // the two tableaux differ only in Z-parts and phases
        for (a, b) in plain.gens().iter().zip(phased.gens()) {
            assert_eq!(a.x, b.x);
        }
    }

    #[test]
    fn product_phase_convention() {
        // X * Z = XZ (phase 0 in canonical order), Z * X = -XZ
        let x = PauliGen::new(bv("1"), bv("0"), 0);
        let z = PauliGen::new(bv("0"), bv("1"), 0);
        assert_eq!(x.mul(&z), PauliGen::new(bv("1"), bv("1"), 0));
        assert_eq!(z.mul(&x), PauliGen::new(bv("1"), bv("1"), 2));
        assert!(!x.commutes(&z));
    }

    #[test]
    fn group_membership_with_phases() {
        let t = tableau_from_instance(&epr_instance(), false).unwrap();
        let xx = PauliGen::new(bv("11"), bv("00"), 0);
        let minus_xx = PauliGen::new(bv("11"), bv("00"), 2);
        // XX * ZZ = (XZ)⊗(XZ) = -YY, phase 0 in canonical X-then-Z form
        let minus_yy = PauliGen::new(bv("11"), bv("11"), 0);
        assert!(t.contains(&xx));
        assert!(!t.contains(&minus_xx));
        let prod = t.gens()[0].mul(&t.gens()[1]);
        assert!(t.contains(&prod));
        assert_eq!(prod, minus_yy);
        assert_eq!(prod.to_string(), "-YY");
    }

    #[test]
    fn rejects_anticommuting_generators() {
        let gens = vec![
            PauliGen::new(bv("10"), bv("00"), 0),
            PauliGen::new(bv("00"), bv("10"), 0),
        ];
        assert_eq!(
            StabilizerTableau::new(2, gens).unwrap_err(),
            StabError::NonCommuting(0, 1)
        );
    }

    #[test]
    fn rejects_dependent_generators() {
        let gens = vec![
            PauliGen::new(bv("11"), bv("00"), 0),
            PauliGen::new(bv("11"), bv("00"), 0),
        ];
        assert_eq!(
            StabilizerTableau::new(2, gens).unwrap_err(),
            StabError::DependentGenerators { rank: 1, expected: 2 }
        );
    }

    #[test]
    fn rejects_bad_phase_parity() {
        // -I on one qubit disguised: phase 1 with no X/Z overlap
        let gens = vec![PauliGen::new(bv("1"), bv("0"), 1)];
        assert!(matches!(
            StabilizerTableau::new(1, gens),
            Err(StabError::PhaseParity { .. })
        ));
    }

    #[test]
    fn gate_conjugations_preserve_validity() {
        let (inst, _) = published_instance();
        let mut t = tableau_from_instance(&inst, true).unwrap();
        t.apply_h(3);
        t.apply_s(5);
        t.apply_z(7);
        t.apply_x(11);
        // re-validate through the constructor
        let revalidated = StabilizerTableau::new(t.n(), t.gens().to_vec());
        assert!(revalidated.is_ok());
    }

    #[test]
    fn diagonal_phase_identity_and_z_layer() {
        let (inst, _) = published_instance();
        let t = tableau_from_instance(&inst, false).unwrap();
        let same = apply_diagonal_phases(&t, &PhaseAssignment::zeros(27)).unwrap();
        assert!(t.same_group(&same));

        // e = 4 everywhere is the Z layer: X-type generator signs flip
        let z_layer = PhaseAssignment::from_octal(&[4; 27]);
        let flipped = apply_diagonal_phases(&t, &z_layer).unwrap();
        for (g, f) in t.gens().iter().zip(flipped.gens()) {
            let expect = (g.phase + 2 * (u8::from(g.x.weight() % 2 == 1))) % 4;
            assert_eq!((f.x.clone(), f.z.clone(), f.phase), (g.x.clone(), g.z.clone(), expect));
        }
    }

    #[test]
    fn published_phases_map_plain_group_to_phased_group() {
        let (inst, w) = published_instance();
        let plain = tableau_from_instance(&inst, false).unwrap();
        let phased = tableau_from_instance(&inst, true).unwrap();
        let image = apply_diagonal_phases(&plain, &w).unwrap();
        assert!(image.same_group(&phased), "image generators must generate the phased group");
        assert!(phased.same_group(&image));
    }

    #[test]
    fn non_octal_phase_rejected() {
        let (inst, _) = published_instance();
        let t = tableau_from_instance(&inst, false).unwrap();
        let bad = PhaseAssignment::from_rationals(vec![crate::mat::Rat::new(1, 3); 27]);
        assert_eq!(
            apply_diagonal_phases(&t, &bad).unwrap_err(),
            StabError::UnsupportedPhase
        );
    }
}
