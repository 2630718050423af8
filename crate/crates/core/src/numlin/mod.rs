//! Dense complex linear algebra: arithmetic, the Hermitian eigensolver, the
//! matrix exponential and the principal logarithm.

mod eig;
mod expm;
mod logm;
mod matrix;
pub(crate) mod real;

pub use eig::{herm_eig, HermitianEigen};
pub use expm::mat_exp;
pub use logm::mat_log_principal;
pub use matrix::ComplexMatrix;

use crate::error::Result;

/// `AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.require_square()?;
    a.require_same_shape(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `Re tr(A B*)`.
pub fn frobenius_real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.require_same_shape(b)?;
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum())
}

/// Unchecked variant for hot loops where shapes are already known to agree.
pub(crate) fn real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}
