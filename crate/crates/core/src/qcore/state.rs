use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::matrix::{c64, ensure_square, hermitian_deviation, trace, CMatrix};
use crate::error::{Error, Result};
use crate::settings::structure_tol;

/// Hermitian, unit-trace, positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        ensure_square(&matrix)?;
        let tol = structure_tol();
        let deviation = hermitian_deviation(&matrix);
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = trace(&matrix);
        if (tr - c64(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let matrix = (&matrix + matrix.adjoint()) * c64(0.5, 0.0);
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let v = psi / c64(norm, 0.0);
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) * c64(1.0 / dim as f64, 0.0),
        }
    }

    /// Diagonal state with the given populations (must be nonnegative and sum to 1).
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &p) in populations.iter().enumerate() {
            m[(i, i)] = c64(p, 0.0);
        }
        Self::new(m)
    }

    /// Hermitian part of `m`, eigenvalues below zero clipped, renormalized to
    /// unit trace. Used for states assembled from random draws.
    pub fn from_clipped(m: &CMatrix) -> Result<Self> {
        ensure_square(m)?;
        let herm = (m + m.adjoint()) * c64(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let clipped: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidState("no positive spectrum to normalize".into()));
        }
        let v = &eig.eigenvectors;
        let mut scaled = v.clone();
        for (j, l) in clipped.iter().enumerate() {
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= c64(l / total, 0.0);
            }
        }
        Ok(Self {
            matrix: scaled * v.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(ρ A)`.
    pub fn expectation(&self, op: &CMatrix) -> Complex64 {
        trace(&(op * &self.matrix))
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.matrix * &self.matrix)).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_has_unit_trace() {
        let rho = DensityOperator::maximally_mixed(4);
        assert!((trace(rho.matrix()).re - 1.0).abs() < 1e-15);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn pure_state_is_rank_one() {
        let psi = DVector::from_vec(vec![c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.0, 0.3)]);
        let rho = DensityOperator::pure(&psi).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-13);
        assert!(DensityOperator::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn rejects_bad_states() {
        assert!(DensityOperator::diagonal(&[0.7, 0.7]).is_err());
        assert!(DensityOperator::diagonal(&[1.2, -0.2]).is_err());
        let m = CMatrix::from_row_slice(2, 2, &[c64(0.5, 0.), c64(0.3, 0.1), c64(0.3, 0.1), c64(0.5, 0.)]);
        assert!(matches!(DensityOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn clipping_removes_negative_spectrum() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(1.1, 0.), c64(0., 0.), c64(0., 0.), c64(-0.1, 0.)]);
        let rho = DensityOperator::from_clipped(&m).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(rho.matrix()[(1, 1)].norm() < 1e-15);
    }
}
