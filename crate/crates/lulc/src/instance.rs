//! The on-disk instance format: basis rows as bit strings (position 1
//! leftmost), 1-based term indices, and optional octal phase exponents.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{BitVec, F2Error, Subspace};
use crate::phase::PhaseAssignment;
use crate::quadform::{QuadFormError, QuadraticForm};
use crate::solver::{QfpInstance, SolverError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("basis row {row} has length {got}, expected n = {expected}")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("declared d = {d} but found {rows} basis rows")]
    RankMismatch { d: usize, rows: usize },
    #[error("term [{i}, {j}] must satisfy 1 <= i < j <= n")]
    BadTerm { i: usize, j: usize },
    #[error("linear term {0} out of range")]
    BadLinearTerm(usize),
    #[error("phase exponent list has length {got}, expected n = {expected}")]
    PhaseLength { expected: usize, got: usize },
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Serialized instance: everything needed to re-verify a counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub d: usize,
    /// d bit strings of length n, position 1 leftmost.
    pub basis: Vec<String>,
    /// 1-based [i, j] pairs with i < j.
    pub quadratic_terms: Vec<[usize; 2]>,
    /// 1-based positions carrying a linear term.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linear_terms: Vec<usize>,
    /// Octal exponents e_j mod 8, c_j = exp(iπ e_j/4).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_exponents_octal: Option<Vec<i64>>,
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Validate and build the typed instance plus the optional witness.
    /// Linear terms are folded into the witness-side phases, so the
    /// resulting form is always pure.
    pub fn to_instance(&self) -> Result<(QfpInstance, Option<PhaseAssignment>), InstanceError> {
        for (row, s) in self.basis.iter().enumerate() {
            if s.chars().count() != self.n {
                return Err(InstanceError::RowLength {
                    row: row + 1,
                    expected: self.n,
                    got: s.chars().count(),
                });
            }
        }
        if self.basis.len() != self.d {
            return Err(InstanceError::RankMismatch { d: self.d, rows: self.basis.len() });
        }
        let rows: Vec<BitVec> = self
            .basis
            .iter()
            .map(|s| s.parse::<BitVec>())
            .collect::<Result<_, _>>()?;
        let s = Subspace::new(self.n, rows)?;

        for &[i, j] in &self.quadratic_terms {
            if i == 0 || j == 0 || i >= j || j > self.n {
                return Err(InstanceError::BadTerm { i, j });
            }
        }
        for &i in &self.linear_terms {
            if i == 0 || i > self.n {
                return Err(InstanceError::BadLinearTerm(i));
            }
        }
        let q = QuadraticForm::from_terms(
            self.n,
            self.quadratic_terms.iter().map(|&[i, j]| (i - 1, j - 1)),
            self.linear_terms.iter().map(|&i| i - 1),
        )?;
        let (pure, shift) = q.normalize_linear();
        let inst = QfpInstance::new(s, pure)?;

        let witness = match &self.phase_exponents_octal {
            None => None,
            Some(e) => {
                if e.len() != self.n {
                    return Err(InstanceError::PhaseLength { expected: self.n, got: e.len() });
                }
                // the linear part moves to the right-hand side: e/2 - shift
                let octal = PhaseAssignment::from_octal(e);
                let negated = PhaseAssignment::from_rationals(
                    shift.entries().iter().map(|v| -v).collect(),
                );
                Some(octal.add(&negated).reduce_mod4())
            }
        };
        Ok((inst, witness))
    }

    /// Serialize a typed instance (pure form) and optional witness.
    pub fn from_instance(inst: &QfpInstance, witness: Option<&PhaseAssignment>) -> Self {
        let basis = inst
            .subspace()
            .basis()
            .iter()
            .map(ToString::to_string)
            .collect();
        let quadratic_terms = inst
            .form()
            .edges()
            .iter()
            .map(|&(i, j)| [i + 1, j + 1])
            .collect();
        Self {
            n: inst.n(),
            d: inst.rank(),
            basis,
            quadratic_terms,
            linear_terms: Vec::new(),
            phase_exponents_octal: witness.and_then(PhaseAssignment::octal_mod8),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::{published_instance, published_exponents};
    use crate::solver::phase_check;

    fn published_file() -> InstanceFile {
        let (inst, w) = published_instance();
        InstanceFile::from_instance(&inst, Some(&w))
    }

    #[test]
    fn published_file_roundtrip_is_identity() {
        let f = published_file();
        let json = f.to_json();
        let g = InstanceFile::from_json(&json).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json(), json);
    }

    #[test]
    fn published_file_rebuilds_verifying_instance() {
        let (inst, w) = published_file().to_instance().unwrap();
        let w = w.expect("witness present");
        assert!(phase_check(&inst, &w).unwrap());
        assert_eq!(inst.n(), 27);
        assert_eq!(w.octal_mod8(), Some(published_exponents()));
    }

    #[test]
    fn linear_terms_fold_into_witness() {
        // Q = x1 x2 + x1 on span{11}: Q(11) = 0, so e = [2, 6] is a witness
        // for the original phases (i * -i = 1). After the fold the pure form
        // is x1 x2 and the witness must still verify exactly.
        let f = InstanceFile {
            n: 2,
            d: 1,
            basis: vec!["11".into()],
            quadratic_terms: vec![[1, 2]],
            linear_terms: vec![1],
            phase_exponents_octal: Some(vec![2, 6]),
        };
        let (inst, w) = f.to_instance().unwrap();
        assert!(inst.form().is_pure());
        assert!(inst.form().edges().contains(&(0, 1)));
        let w = w.expect("witness present");
        assert!(phase_check(&inst, &w).unwrap());
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(InstanceFile::from_json("{ not json").is_err());
        let mut f = published_file();
        f.quadratic_terms.push([5, 5]);
        assert!(matches!(f.to_instance(), Err(InstanceError::BadTerm { i: 5, j: 5 })));
        let mut f = published_file();
        f.basis[0].pop();
        assert!(matches!(f.to_instance(), Err(InstanceError::RowLength { .. })));
        let mut f = published_file();
        f.phase_exponents_octal = Some(vec![1, 2, 3]);
        assert!(matches!(f.to_instance(), Err(InstanceError::PhaseLength { .. })));
        let mut f = published_file();
        f.d = 5;
        assert!(matches!(f.to_instance(), Err(InstanceError::RankMismatch { .. })));
    }
}
