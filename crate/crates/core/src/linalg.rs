//! Small complex-matrix helpers shared by the numerical modules.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn cplx(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

/// Entrywise max modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// || M - M^* ||_max, zero for Hermitian matrices.
pub fn hermitian_residual(m: &CMat) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// || M^* M - I ||_max, zero for unitary matrices.
pub fn unitary_residual(m: &CMat) -> f64 {
    let n = m.ncols();
    max_abs(&(m.adjoint() * m - CMat::identity(n, n)))
}

/// || P^2 - P ||_max, zero for idempotents.
pub fn idempotency_residual(p: &CMat) -> f64 {
    max_abs(&(p * p - p))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let sym = m.clone().symmetric_eigen();
    let mut eigs: Vec<f64> = sym.eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}
