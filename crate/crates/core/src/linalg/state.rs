use std::sync::{Arc, OnceLock};

use super::eig::{jacobi_eigh, EigenDecomposition};
use super::matrix::{pauli_x, pauli_y, pauli_z, r, ComplexMatrix, C64};
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are outside the support of a state.
pub const SUPPORT_TOL: f64 = 1e-13;

/// Square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    eig: Arc<OnceLock<EigenDecomposition>>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    /// Validates Hermiticity at 1e-12 (entrywise) and stores the exactly
    /// symmetrized matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let residual = matrix.hermiticity_residual();
        if residual > HERMITICITY_TOL {
            return Err(Error::NonHermitian { residual });
        }
        Ok(Self::from_hermitian_part(&matrix))
    }

    /// (A + A^dagger)/2 with no tolerance check.
    pub fn from_hermitian_part(matrix: &ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            eig: Arc::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Cached eigendecomposition, eigenvalues ascending.
    pub fn eig(&self) -> &EigenDecomposition {
        self.eig.get_or_init(|| jacobi_eigh(&self.matrix))
    }

    pub fn lambda_min(&self) -> f64 {
        self.eig().min()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// f applied to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        self.eig().map(f)
    }
}

/// Positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    /// Checks eigenvalues >= -1e-10 and |Tr - 1| <= 1e-10.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_operator(HermitianOperator::new(matrix)?)
    }

    pub fn from_operator(op: HermitianOperator) -> Result<Self> {
        let trace_residual = (op.trace() - 1.0).abs();
        if trace_residual > TRACE_TOL {
            return Err(Error::InvalidState {
                invariant: "unit trace",
                residual: trace_residual,
            });
        }
        let lmin = op.lambda_min();
        if lmin < -PSD_TOL {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                residual: -lmin,
            });
        }
        Ok(Self { op })
    }

    /// Wraps a matrix known to be a state up to roundoff (outputs of channels,
    /// partial traces). It is symmetrized but not re-validated.
    pub(crate) fn from_trusted(matrix: &ComplexMatrix) -> Self {
        Self {
            op: HermitianOperator::from_hermitian_part(matrix),
        }
    }

    /// |psi><psi| for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = super::matrix::norm(psi);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState {
                invariant: "nonzero state vector",
                residual: n,
            });
        }
        let v: Vec<C64> = psi.iter().map(|x| x / n).collect();
        Ok(Self::from_trusted(&ComplexMatrix::outer(&v, &v)))
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Self::from_trusted(&ComplexMatrix::outer(
            &super::matrix::basis_ket(dim, i),
            &super::matrix::basis_ket(dim, i),
        ))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(&ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diag(probs))
    }

    /// Qubit state (I + r.sigma)/2; requires |r| <= 1 (within the PSD tolerance).
    pub fn from_bloch(v: [f64; 3]) -> Result<Self> {
        Self::new(bloch_matrix(v))
    }

    pub(crate) fn from_bloch_trusted(v: [f64; 3]) -> Self {
        Self::from_trusted(&bloch_matrix(v))
    }

    /// Bloch vector (Tr rho X, Tr rho Y, Tr rho Z); qubits only.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch vector needs a qubit, got dim {}",
                self.dim()
            )));
        }
        Ok(bloch_of(self.matrix()))
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn eig(&self) -> &EigenDecomposition {
        self.op.eig()
    }

    /// Spectrum clamped at zero.
    pub fn probabilities(&self) -> Vec<f64> {
        self.eig().eigenvalues.iter().map(|&l| l.max(0.0)).collect()
    }

    /// rho^p on the support (eigenvalues above `SUPPORT_TOL`), 0^p := 0.
    pub fn power(&self, p: f64) -> ComplexMatrix {
        self.op.map_spectrum(|l| if l <= SUPPORT_TOL { 0.0 } else { l.powf(p) })
    }

    pub fn sqrt(&self) -> ComplexMatrix {
        self.power(0.5)
    }

    /// Tensor product of two states.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        Self::from_trusted(&self.matrix().kron(other.matrix()))
    }

    pub fn purity(&self) -> f64 {
        self.matrix().inner(self.matrix()).re
    }
}

fn bloch_matrix(v: [f64; 3]) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(2);
    for (k, p) in [pauli_x(), pauli_y(), pauli_z()].iter().enumerate() {
        m = &m + &p.scale(r(v[k]));
    }
    m.scale_real(0.5)
}

/// Bloch coordinates Tr(A sigma_k) of any 2x2 matrix, real parts.
pub(crate) fn bloch_of(m: &ComplexMatrix) -> [f64; 3] {
    let x = (m[(0, 1)] + m[(1, 0)]).re;
    let y = (m[(1, 0)] - m[(0, 1)]).im;
    let z = (m[(0, 0)] - m[(1, 1)]).re;
    [x, y, z]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::c;

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[vec![r(1.0), r(1.0)], vec![r(0.0), r(1.0)]]).unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn rejects_bad_trace_and_negative() {
        assert!(matches!(
            DensityMatrix::diagonal(&[0.5, 0.6]),
            Err(Error::InvalidState {
                invariant: "unit trace",
                ..
            })
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[1.2, -0.2]),
            Err(Error::InvalidState {
                invariant: "positive semidefinite",
                ..
            })
        ));
    }

    #[test]
    fn bloch_roundtrip() {
        let v = [0.3, -0.4, 0.5];
        let rho = DensityMatrix::from_bloch(v).unwrap();
        let back = rho.bloch_vector().unwrap();
        for k in 0..3 {
            assert!((back[k] - v[k]).abs() < 1e-15);
        }
        assert!(DensityMatrix::from_bloch([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn pure_state_normalizes() {
        let rho = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!(DensityMatrix::pure(&[c(0.0, 0.0)]).is_err());
    }
}
