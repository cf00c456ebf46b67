//! Dense spectral calculus: eigendecomposition, semigroups, singular values,
//! counting functions, traces and decay-rate regression.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeOperator;
use crate::matrix::{Complex64, DenseMatrix};
use crate::numerics::{compensated_sum, fit_line};

/// Largest matrix dimension decomposed by default.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Singular values at or below this are treated as eigensolver noise.
pub const DEFAULT_FLOOR: f64 = 1e-12;

/// Leading singular values dropped from decay fits (prefactor transient).
pub const DEFAULT_SKIP_LEADING: usize = 3;

/// Eigenvalues in ascending order (with multiplicity) and, optionally, the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    basis: Option<DenseMatrix>,
}

impl SpectralData {
    /// Spectral data for a known spectrum with no eigenvectors.
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self {
            eigenvalues,
            basis: None,
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> Option<&DenseMatrix> {
        self.basis.as_ref()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `max |H - U Λ U^†|`.
    pub fn reconstruction_residual(&self, h: &DenseMatrix) -> Option<f64> {
        let rebuilt = self.apply_function(|x| x)?;
        Some(rebuilt.sub(h).ok()?.max_abs())
    }

    /// `max |U^† U - I|`.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let u = self.basis.as_ref()?;
        let defect = match u {
            DenseMatrix::Real(u) => {
                let g = u.transpose() * u;
                (g - DMatrix::identity(u.ncols(), u.ncols())).amax()
            }
            DenseMatrix::Complex(u) => {
                let g = u.adjoint() * u;
                let id = DMatrix::<Complex64>::identity(u.ncols(), u.ncols());
                (g - id).iter().fold(0.0f64, |a, z| a.max(z.norm()))
            }
        };
        Some(defect)
    }

    /// `U f(Λ) U^†`.
    fn apply_function<F: Fn(f64) -> f64>(&self, f: F) -> Option<DenseMatrix> {
        let u = self.basis.as_ref()?;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        Some(match u {
            DenseMatrix::Real(u) => {
                let mut scaled = u.clone();
                for (j, w) in weights.iter().enumerate() {
                    scaled.column_mut(j).scale_mut(*w);
                }
                let m = &scaled * u.transpose();
                DenseMatrix::Real(symmetrize_real(m))
            }
            DenseMatrix::Complex(u) => {
                let mut scaled = u.clone();
                for (j, w) in weights.iter().enumerate() {
                    scaled.column_mut(j).scale_mut(*w);
                }
                let m = &scaled * u.adjoint();
                DenseMatrix::Complex(symmetrize_complex(m))
            }
        })
    }
}

fn symmetrize_real(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn symmetrize_complex(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let t = m.adjoint();
    (m + t).map(|z| z * 0.5)
}

fn check_decomposable(h: &DenseMatrix, cap: usize) -> Result<()> {
    if h.dim() > cap {
        return Err(Error::DenseCapExceeded { size: h.dim(), cap });
    }
    let asym = h.max_asymmetry();
    if asym != 0.0 {
        return Err(Error::NotHermitian { max_asymmetry: asym });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigen_decompose_matrix(h: &DenseMatrix, cap: usize) -> Result<SpectralData> {
    check_decomposable(h, cap)?;
    let (values, basis) = match h {
        DenseMatrix::Real(m) => {
            let eig = SymmetricEigen::new(m.clone());
            let order = ascending_order(eig.eigenvalues.as_slice());
            let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let basis = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
            (values, DenseMatrix::Real(basis))
        }
        DenseMatrix::Complex(m) => {
            let eig = SymmetricEigen::new(m.clone());
            let order = ascending_order(eig.eigenvalues.as_slice());
            let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
            let basis = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
            (values, DenseMatrix::Complex(basis))
        }
    };
    Ok(SpectralData {
        eigenvalues: values,
        basis: Some(basis),
    })
}

/// Eigenvalues only, ascending. Cheaper than the full decomposition.
pub fn eigenvalues_only(h: &DenseMatrix, cap: usize) -> Result<SpectralData> {
    check_decomposable(h, cap)?;
    let mut values: Vec<f64> = match h {
        DenseMatrix::Real(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
        DenseMatrix::Complex(m) => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    };
    values.sort_by(f64::total_cmp);
    Ok(SpectralData {
        eigenvalues: values,
        basis: None,
    })
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Eigendecomposition of an assembled lattice operator.
pub fn eigen_decompose(op: &LatticeOperator) -> Result<SpectralData> {
    eigen_decompose_matrix(&op.matrix(), DEFAULT_DENSE_CAP)
}

/// `e^{-tH} = U e^{-tΛ} U^†`.
pub fn semigroup(spec: &SpectralData, t: f64) -> Result<DenseMatrix> {
    if !(t > 0.0) {
        return Err(Error::invalid("t", format!("must be positive, got {t}")));
    }
    spec.apply_function(|x| (-t * x).exp())
        .ok_or_else(|| Error::invalid("spectral_data", "eigenvectors were not computed"))
}

/// Nonincreasing, nonnegative singular values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularValueList(Vec<f64>);

impl SingularValueList {
    pub fn new(mut values: Vec<f64>) -> Self {
        for v in values.iter_mut() {
            *v = v.abs();
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All singular values of a dense matrix, largest first.
pub fn singular_values(m: &DenseMatrix) -> SingularValueList {
    let values: Vec<f64> = match m {
        DenseMatrix::Real(m) => m.clone().singular_values().iter().copied().collect(),
        DenseMatrix::Complex(m) => m.clone().singular_values().iter().copied().collect(),
    };
    SingularValueList::new(values)
}

/// `#{n : λ_n ≤ E}`.
pub fn counting_function(spec: &SpectralData, energy: f64) -> usize {
    spec.eigenvalues.partition_point(|&x| x <= energy)
}

/// Number of eigenvalues in the closed window `[lo, hi]`.
pub fn window_count(spec: &SpectralData, lo: f64, hi: f64) -> usize {
    if hi < lo {
        return 0;
    }
    counting_function(spec, hi) - spec.eigenvalues.partition_point(|&x| x < lo)
}

/// `Tr f(H) = Σ_n f(λ_n)`, compensated.
pub fn trace_function<F: Fn(f64) -> f64>(spec: &SpectralData, f: F) -> Result<f64> {
    let mut values = Vec::with_capacity(spec.len());
    for &x in &spec.eigenvalues {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { at: x });
        }
        values.push(v);
    }
    Ok(compensated_sum(values))
}

/// Least-squares fit `log μ_n = log C - c n^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub alpha: f64,
    pub rate: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    /// First and last (1-based) index used.
    pub n_min: usize,
    pub n_max: usize,
    pub floor: f64,
}

/// Decay fit with the default leading-value skip.
pub fn fit_decay(sv: &SingularValueList, alpha: f64, floor: f64) -> Result<DecayFit> {
    fit_decay_with(sv, alpha, floor, DEFAULT_SKIP_LEADING)
}

/// Decay fit over `{n > skip_leading : μ_n > floor}`.
pub fn fit_decay_with(
    sv: &SingularValueList,
    alpha: f64,
    floor: f64,
    skip_leading: usize,
) -> Result<DecayFit> {
    if !(alpha > 0.0) {
        return Err(Error::invalid("alpha", "must be positive"));
    }
    let points: Vec<(usize, f64)> = sv
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (i + 1, v))
        .skip(skip_leading)
        .take_while(|&(_, v)| v > floor)
        .collect();
    if points.len() < 5 {
        return Err(Error::TooFewPoints {
            required: 5,
            found: points.len(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).powf(alpha)).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let line = fit_line(&xs, &ys).ok_or(Error::TooFewPoints {
        required: 5,
        found: points.len(),
    })?;
    Ok(DecayFit {
        alpha,
        rate: -line.slope,
        prefactor: line.intercept.exp(),
        r_squared: line.r_squared,
        n_min: points[0].0,
        n_max: points[points.len() - 1].0,
        floor,
    })
}
