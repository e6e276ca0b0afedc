//! Exact-arithmetic library for generating, verifying and regenerating
//! counterexamples to the equivalence of local-unitary and local-Clifford
//! classifications of stabilizer states.
//!
//! The pipeline: a linear subspace S of F₂ⁿ plus a quadratic form Q define a
//! phase problem; its linearization over patterns reduces to a mod-4
//! congruence system; a randomized backward construction at rank 6 produces
//! instances whose witness phases are eighth roots of unity while the mod-4
//! system is contradictory; and the stabilizer pipeline turns such an
//! instance into two graph states that are LU- but not LC-equivalent.

pub mod f2;
pub mod forge;
pub mod instance;
pub mod mat;
pub mod patterns;
pub mod phase;
pub mod quadform;
pub mod solver;
pub mod stab;

pub use f2::{BitMatrix, BitVec, Subspace};
pub use forge::{published_instance, search, Candidate, VerifiedCounterexample};
pub use instance::InstanceFile;
pub use phase::PhaseAssignment;
pub use quadform::QuadraticForm;
pub use solver::{
    build_mod4_system, phase_check, qfp_decide, solve_mod4, Mod4System, QfpInstance, SolveOutcome,
    Verdict,
};
