//! Density matrices tagged with the basis they are written in.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{binomial, popcount, ZERO};

/// Basis of a `k`-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Dicke basis of the symmetric subspace, dimension `k + 1`.
    Symmetric { k: usize },
    /// Computational basis, dimension `2^k`.
    Computational { k: usize },
}

impl Basis {
    pub fn k(&self) -> usize {
        match *self {
            Basis::Symmetric { k } | Basis::Computational { k } => k,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Basis::Symmetric { k } => k + 1,
            Basis::Computational { k } => 1 << k,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: Basis,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity at `tol`.
    pub fn new(basis: Basis, entries: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let dm = Self::from_parts(basis, entries)?;
        dm.validate(tol)?;
        Ok(dm)
    }

    /// Checks only the shape.
    pub(crate) fn from_parts(basis: Basis, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != basis.dim() || entries.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: entries.nrows(),
            });
        }
        Ok(Self { basis, entries })
    }

    /// `|ψ⟩⟨ψ|` in the computational basis for a normalized `2^k` vector.
    pub fn from_pure(k: usize, amps: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amps);
        Self::from_parts(Basis::Computational { k }, &v * v.adjoint())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn k(&self) -> usize {
        self.basis.k()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().0
    }

    /// Eigenpairs in descending eigenvalue order; eigenvectors are columns.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = hermitian_eigen(&self.entries);
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.0[b].total_cmp(&eig.0[a]));
        let values = order.iter().map(|&i| eig.0[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.1[(r, order[c])]);
        (values, vectors)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > tol).count()
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm_dev = (&self.entries - self.entries.adjoint()).camax();
        if herm_dev > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} ≠ 1")));
        }
        let min = self.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(())
    }

    /// Rewrites a symmetric-basis matrix in the `2^k` computational basis.
    pub fn to_computational(&self) -> DensityMatrix {
        match self.basis {
            Basis::Computational { .. } => self.clone(),
            Basis::Symmetric { k } => {
                let embed = DMatrix::from_fn(1 << k, k + 1, |x, j| {
                    if popcount(x) == j {
                        Complex64::new(binomial(k, j).sqrt().recip(), 0.0)
                    } else {
                        ZERO
                    }
                });
                DensityMatrix {
                    basis: Basis::Computational { k },
                    entries: &embed * &self.entries * embed.adjoint(),
                }
            }
        }
    }

    /// Frobenius distance, comparing in the computational basis when the
    /// two bases differ.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                actual: other.k(),
            });
        }
        if self.basis == other.basis {
            return Ok((&self.entries - &other.entries).norm());
        }
        let (a, b) = (self.to_computational(), other.to_computational());
        Ok((a.entries - b.entries).norm())
    }
}

/// Eigenvalues and eigenvector columns of the Hermitian part of `m`.
///
/// The QR iteration runs on `m + ‖m‖ I`. On strongly rank-deficient input
/// the unshifted iteration can drive off-diagonal entries through the
/// subnormal range and return non-finite values; with the shift the small
/// eigenvalues sit near `‖m‖` and deflate at ordinary relative precision.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let herm = (m + m.adjoint()).scale(0.5);
    let shift = herm.norm().max(f64::MIN_POSITIVE);
    let eig = SymmetricEigen::new(herm + DMatrix::from_diagonal_element(n, n, Complex64::new(shift, 0.0)));
    (eig.eigenvalues.map(|v| v - shift), eig.eigenvectors)
}
