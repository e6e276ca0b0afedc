//! Small dense matrices with exact integer and rational entries.
//!
//! Just enough machinery for the pattern-matrix calculus; no floating
//! point anywhere.

use num_rational::Rational64;
use num_traits::Zero;

/// Exact rational scalar used across the crate.
pub type Rat = Rational64;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i64::from(i == j))
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul_vec_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (&a, b)| acc + Rat::from_integer(a) * b)
            })
            .collect()
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> Rat {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rat> {
        let rv: Vec<Rat> = v.iter().map(|&x| Rat::from_integer(x)).collect();
        self.mul_vec(&rv)
    }

    /// Exact rational product with an integer matrix on the right.
    pub fn mul_int_mat(&self, other: &IntMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows(), "dimension mismatch in product");
        let mut out = RatMatrix::zeros(self.rows, other.cols());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols() {
                    let b = other.at(k, j);
                    if b != 0 {
                        out.data[i * out.cols + j] += a * Rat::from_integer(b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_int_mat_left(a: &IntMatrix, b: &RatMatrix) -> RatMatrix {
        assert_eq!(a.cols(), b.rows, "dimension mismatch in product");
        let mut out = RatMatrix::zeros(a.rows(), b.cols);
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let x = a.at(i, k);
                if x == 0 {
                    continue;
                }
                let x = Rat::from_integer(x);
                for j in 0..b.cols {
                    out.data[i * out.cols + j] += x * b.at(k, j);
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.at(i, j) == Rat::from_integer(i64::from(i == j)))
            })
    }
}
