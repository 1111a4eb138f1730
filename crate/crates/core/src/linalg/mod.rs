//! Dense complex linear algebra for small matrices (dimension up to a few
//! dozen): Hermitian eigendecomposition, tensor products, partial traces,
//! trace norm and fidelity.
//!
//! Everything here is a pure function of immutable values.

mod eig;
mod matrix;
pub mod random;
mod state;

pub use eig::EigenDecomposition;
pub use matrix::{
    basis_ket, c, dot, kron, kron_all, kron_vec, norm, pauli_x, pauli_y, pauli_z, r, ComplexMatrix, C64, ONE, ZERO,
};
pub use state::{DensityMatrix, HermitianOperator, HERMITICITY_TOL, PSD_TOL, SUPPORT_TOL, TRACE_TOL};

pub(crate) use state::bloch_of;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
pub fn hermitian_eig(h: &HermitianOperator) -> EigenDecomposition {
    h.eig().clone()
}

/// Validating variant for raw matrices; fails with `NonHermitian` beyond 1e-12.
pub fn hermitian_eig_of(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    Ok(HermitianOperator::new(m.clone())?.eig().clone())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let m = partial_trace_matrix(rho.matrix(), dims, keep)?;
    Ok(DensityMatrix::from_trusted(&m))
}

/// Partial trace on an arbitrary square operator.
pub fn partial_trace_matrix(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} (product {total}) do not match operator dim {}",
            m.rows()
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() || keep_sorted.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "keep set {keep:?} invalid for {} subsystems",
            dims.len()
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep_sorted.contains(k)).collect();
    let kd: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let td: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kept_dim: usize = kd.iter().product();
    let traced_dim: usize = td.iter().product();

    // strides of each subsystem in the full index
    let mut stride = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        stride[k] = stride[k + 1] * dims[k + 1];
    }
    let offset = |sub: &[usize], sub_dims: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for pos in (0..sub.len()).rev() {
            off += (idx % sub_dims[pos]) * stride[sub[pos]];
            idx /= sub_dims[pos];
        }
        off
    };
    let kept_off: Vec<usize> = (0..kept_dim).map(|i| offset(&keep_sorted, &kd, i)).collect();
    let traced_off: Vec<usize> = (0..traced_dim).map(|t| offset(&traced, &td, t)).collect();

    Ok(ComplexMatrix::from_fn(kept_dim, kept_dim, |i, j| {
        traced_off.iter().map(|&t| m[(kept_off[i] + t, kept_off[j] + t)]).sum()
    }))
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("trace norm of a non-square matrix".into()));
    }
    if a.hermiticity_residual() <= 1e-14 * a.max_abs().max(1.0) {
        let e = HermitianOperator::from_hermitian_part(a);
        return Ok(e.eig().eigenvalues.iter().map(|l| l.abs()).sum());
    }
    let gram = HermitianOperator::from_hermitian_part(&(&a.dagger() * a));
    Ok(gram.eig().eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum())
}

/// F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1, clamped to [0, 1].
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let ss = sigma.sqrt();
    let inner = &(&ss * rho.matrix()) * &ss;
    let op = HermitianOperator::from_hermitian_part(&inner);
    let f: f64 = op.eig().eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok(f.clamp(0.0, 1.0))
}

pub(crate) fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}
