//! Per-position phase exponents: c_j = i^{r_j} with exact rational r_j.
//!
//! The octal view exposes e_j = 2 r_j when every such value is an integer,
//! so c_j = exp(iπ e_j / 4) is a power of the eighth root of unity.

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::mat::Rat;

/// Exponent vector r with c_j = i^{r_j}; entries are interpreted mod 4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PhaseAssignment {
    r: Vec<Rat>,
}

impl PhaseAssignment {
    #[must_use]
    pub fn zeros(n: usize) -> Self {
        Self { r: vec![Rat::zero(); n] }
    }

    #[must_use]
    pub fn from_rationals(r: Vec<Rat>) -> Self {
        Self { r }
    }

    pub fn from_integers(r: &[i64]) -> Self {
        Self { r: r.iter().map(|&x| Rat::from_integer(x)).collect() }
    }

    /// From octal exponents e: r_j = e_j / 2, so c_j = exp(iπ e_j/4).
    pub fn from_octal(e: &[i64]) -> Self {
        Self { r: e.iter().map(|&x| Rational64::new(x, 2)).collect() }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.r.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn get(&self, j: usize) -> Rat {
        self.r[j]
    }

    #[must_use]
    pub fn entries(&self) -> &[Rat] {
        &self.r
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Zero::is_zero)
    }

    #[must_use]
    pub fn is_integral(&self) -> bool {
        self.r.iter().all(|x| x.is_integer())
    }

    /// Octal exponents e_j = 2 r_j, present iff all are integers.
    #[must_use]
    pub fn octal(&self) -> Option<Vec<i64>> {
        self.r
            .iter()
            .map(|x| {
                let e = x * Rat::from_integer(2);
                e.is_integer().then(|| e.to_integer())
            })
            .collect()
    }

    /// Octal exponents reduced into 0..8.
    #[must_use]
    pub fn octal_mod8(&self) -> Option<Vec<i64>> {
        self.octal()
            .map(|e| e.into_iter().map(|x| x.rem_euclid(8)).collect())
    }

    /// Each entry reduced into [0, 4); phases are unchanged.
    #[must_use]
    pub fn reduce_mod4(&self) -> Self {
        Self { r: self.r.iter().map(|x| rat_mod4(*x)).collect() }
    }

    /// Entrywise sum; both assignments must have the same length.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "phase length mismatch");
        Self { r: self.r.iter().zip(&other.r).map(|(a, b)| a + b).collect() }
    }

    /// Entrywise floor: the largest integer not exceeding each r_j.
    #[must_use]
    pub fn floor(&self) -> Self {
        Self { r: self.r.iter().map(|x| x.floor()).collect() }
    }
}

/// Reduce a rational into [0, 4) modulo 4.
#[must_use]
pub fn rat_mod4(x: Rat) -> Rat {
    let four = Rat::from_integer(4);
    let mut y = x - (x / four).floor() * four;
    if y.is_negative() {
        y += four;
    }
    y
}

/// True when x ≡ 0 (mod 4) as an exact rational congruence.
#[must_use]
pub fn rat_is_zero_mod4(x: Rat) -> bool {
    x.is_integer() && x.to_integer().rem_euclid(4) == 0
}
