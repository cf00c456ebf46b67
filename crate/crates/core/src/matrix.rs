//! Dense Hermitian matrix storage, real or complex.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;

/// A dense square matrix. Real storage is used whenever no magnetic phases are
/// present, which halves the cost of every decomposition.
#[derive(Debug, Clone, PartialEq)]
pub enum DenseMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix::Real(DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        DenseMatrix::Real(DMatrix::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 }))
    }

    pub fn dim(&self) -> usize {
        match self {
            DenseMatrix::Real(m) => m.nrows(),
            DenseMatrix::Complex(m) => m.nrows(),
        }
    }

    pub fn is_complex(&self) -> bool {
        matches!(self, DenseMatrix::Complex(_))
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            DenseMatrix::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            DenseMatrix::Complex(m) => m.clone(),
        }
    }

    /// Entry `(i, j)` as a complex number.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            DenseMatrix::Real(m) => Complex64::new(m[(i, j)], 0.0),
            DenseMatrix::Complex(m) => m[(i, j)],
        }
    }

    /// `max |M - M^†|` over all entries.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        match self {
            DenseMatrix::Real(m) => {
                for i in 0..n {
                    for j in 0..i {
                        worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
                    }
                }
            }
            DenseMatrix::Complex(m) => {
                for i in 0..n {
                    for j in 0..=i {
                        worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            DenseMatrix::Real(m) => m.iter().fold(0.0, |a, x| a.max(x.abs())),
            DenseMatrix::Complex(m) => m.iter().fold(0.0, |a, x| a.max(x.norm())),
        }
    }

    /// Entrywise difference `self - other`.
    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(match (self, other) {
            (DenseMatrix::Real(a), DenseMatrix::Real(b)) => DenseMatrix::Real(a - b),
            _ => DenseMatrix::Complex(self.to_complex() - other.to_complex()),
        })
    }

    /// Copy with `shift[i]` added to diagonal entry `i`.
    pub fn add_diagonal(&self, shift: &[f64]) -> Result<DenseMatrix> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: shift.len(),
            });
        }
        let mut out = self.clone();
        match &mut out {
            DenseMatrix::Real(m) => {
                for (i, s) in shift.iter().enumerate() {
                    m[(i, i)] += s;
                }
            }
            DenseMatrix::Complex(m) => {
                for (i, s) in shift.iter().enumerate() {
                    m[(i, i)] += Complex64::new(*s, 0.0);
                }
            }
        }
        Ok(out)
    }

    /// Embed into a larger zero matrix: row/column `i` of `self` lands at
    /// `positions[i]` of an `n x n` result.
    pub fn embed(&self, positions: &[usize], n: usize) -> Result<DenseMatrix> {
        if positions.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: positions.len(),
            });
        }
        if positions.iter().any(|&p| p >= n) {
            return Err(Error::invalid("positions", "embedding index out of range"));
        }
        Ok(match self {
            DenseMatrix::Real(m) => {
                let mut out = DMatrix::zeros(n, n);
                for (i, &pi) in positions.iter().enumerate() {
                    for (j, &pj) in positions.iter().enumerate() {
                        out[(pi, pj)] = m[(i, j)];
                    }
                }
                DenseMatrix::Real(out)
            }
            DenseMatrix::Complex(m) => {
                let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
                for (i, &pi) in positions.iter().enumerate() {
                    for (j, &pj) in positions.iter().enumerate() {
                        out[(pi, pj)] = m[(i, j)];
                    }
                }
                DenseMatrix::Complex(out)
            }
        })
    }
}
