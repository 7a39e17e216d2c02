use nalgebra::{DVector, SymmetricEigen};

use super::matrix::{c64, ensure_dim, ensure_square, hermitian_deviation, CMatrix};
use crate::error::{Error, Result};
use crate::settings::structure_tol;

/// Time-independent Hermitian generator (units with ħ = 1).
///
/// The eigendecomposition `H = V diag(λ) V†` is computed once at
/// construction; every propagator is assembled from it.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    matrix: CMatrix,
    eigenvalues: DVector<f64>,
    eigenvectors: CMatrix,
}

impl Hamiltonian {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        ensure_square(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > structure_tol() {
            return Err(Error::NotHermitian { deviation });
        }
        // Symmetrize away rounding before diagonalizing.
        let herm = (&matrix + matrix.adjoint()) * c64(0.5, 0.0);
        let eig = SymmetricEigen::new(herm.clone());
        Ok(Self {
            matrix: herm,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim)).expect("zero matrix is Hermitian")
    }

    /// `ω n̂·J` with `J` the spin-`(dim-1)/2` operators; for `dim = 2` this is
    /// `(ω/2) n̂·σ`. The axis is normalized.
    pub fn spin_precession(dim: usize, omega: f64, axis: [f64; 3]) -> Result<Self> {
        let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
        if dim == 0 || !(norm > 0.0) || !norm.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidSpec(
                "spin precession needs dim > 0, finite omega and a nonzero axis".into(),
            ));
        }
        let [jx, jy, jz] = spin_operators(dim);
        let m = (jx * c64(axis[0] / norm, 0.0)
            + jy * c64(axis[1] / norm, 0.0)
            + jz * c64(axis[2] / norm, 0.0))
            * c64(omega, 0.0);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    /// `e^{-iHt}`.
    pub fn propagator(&self, t: f64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            let phase = c64(0.0, -lambda * t).exp();
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= phase;
            }
        }
        scaled * v.adjoint()
    }
}

/// Heisenberg-picture operator `e^{iHt} A e^{-iHt}`.
pub fn heisenberg_evolve(op: &CMatrix, h: &Hamiltonian, t: f64) -> Result<CMatrix> {
    ensure_dim(op, h.dim())?;
    if t == 0.0 {
        return Ok(op.clone());
    }
    let u = h.propagator(t);
    Ok(u.adjoint() * op * u)
}

/// Spin operators `(Jx, Jy, Jz)` for spin `j = (dim-1)/2` in the basis
/// `m = j, j-1, …, -j`.
pub fn spin_operators(dim: usize) -> [CMatrix; 3] {
    let j = (dim as f64 - 1.0) / 2.0;
    let mut jz = CMatrix::zeros(dim, dim);
    let mut jp = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let m = j - k as f64;
        jz[(k, k)] = c64(m, 0.0);
        if k > 0 {
            // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩, and |m+1⟩ sits at index k-1.
            jp[(k - 1, k)] = c64((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c64(0.5, 0.0);
    let jy = (&jp - &jm) * c64(0.0, -0.5);
    [jx, jy, jz]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{identity, max_abs, trace};

    fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
    }

    fn up_projector() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(0., 0.)])
    }

    /// exp(-i θ σx) = cos θ − i sin θ σx, applied directly.
    fn closed_form_heisenberg(e: &CMatrix, omega: f64, t: f64) -> CMatrix {
        let th = omega * t / 2.0;
        let u = identity(2) * c64(th.cos(), 0.0) + sigma_x() * c64(0.0, -th.sin());
        u.adjoint() * e * u
    }

    #[test]
    fn zero_hamiltonian_and_zero_time_leave_projector() {
        let e = up_projector();
        let h0 = Hamiltonian::zero(2);
        assert!(max_abs(&(heisenberg_evolve(&e, &h0, 3.7).unwrap() - &e)) < 1e-15);
        let h = Hamiltonian::new(sigma_x()).unwrap();
        assert!(max_abs(&(heisenberg_evolve(&e, &h, 0.0).unwrap() - &e)) < 1e-15);
    }

    #[test]
    fn qubit_precession_matches_closed_form() {
        let omega = 1.3;
        let h = Hamiltonian::new(sigma_x() * c64(omega / 2.0, 0.0)).unwrap();
        let e = up_projector();
        for &t in &[0.1, 0.7, 2.0, 5.5] {
            let evolved = heisenberg_evolve(&e, &h, t).unwrap();
            let oracle = closed_form_heisenberg(&e, omega, t);
            assert!(max_abs(&(&evolved - &oracle)) < 1e-13);
            let p = trace(&(&evolved * &e)).re;
            assert!((p - (omega * t / 2.0).cos().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn spin_half_precession_is_half_sigma() {
        let h = Hamiltonian::spin_precession(2, 2.0, [1.0, 0.0, 0.0]).unwrap();
        assert!(max_abs(&(h.matrix() - sigma_x())) < 1e-15);
    }

    #[test]
    fn spin_operators_satisfy_commutator() {
        for dim in 2..6 {
            let [jx, jy, jz] = spin_operators(dim);
            let comm = &jx * &jy - &jy * &jx;
            assert!(max_abs(&(comm - jz * c64(0.0, 1.0))) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_mismatch() {
        let m = CMatrix::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(0., 0.), c64(0., 0.)]);
        assert!(matches!(Hamiltonian::new(m), Err(Error::NotHermitian { .. })));
        let h = Hamiltonian::zero(3);
        assert!(matches!(
            heisenberg_evolve(&up_projector(), &h, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
