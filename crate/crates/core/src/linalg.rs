//! Small dense linear-algebra helpers shared across modules.

use faer::{c64, Col, Mat, MatRef, Side};

use crate::error::{Error, Result};

pub const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub const ONE: c64 = c64 { re: 1.0, im: 0.0 };
pub const I: c64 = c64 { re: 0.0, im: 1.0 };

/// `exp(i theta)`.
#[inline]
pub fn cis(theta: f64) -> c64 {
    c64::new(theta.cos(), theta.sin())
}

pub fn max_abs_diff(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    assert_eq!(a.nrows(), b.nrows());
    assert_eq!(a.ncols(), b.ncols());
    let mut max = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            max = max.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    max
}

/// Largest element of `|M - M^dagger|`.
pub fn hermiticity_deviation(m: MatRef<'_, c64>) -> f64 {
    let n = m.nrows();
    let mut max = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

/// Largest element of `|U^dagger U - I|`.
pub fn unitarity_deviation(u: MatRef<'_, c64>) -> f64 {
    let gram = u.adjoint() * u;
    identity_deviation(gram.as_ref())
}

/// Largest element of `|M - I|`.
pub fn identity_deviation(m: MatRef<'_, c64>) -> f64 {
    let mut max = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { ONE } else { ZERO };
            max = max.max((m[(i, j)] - target).norm());
        }
    }
    max
}

/// Largest element of `|AB - BA|`.
pub fn commutator_deviation(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> f64 {
    let ab = a * b;
    let ba = b * a;
    max_abs_diff(ab.as_ref(), ba.as_ref())
}

/// Orthonormality defect of the columns of `v`: max `|V^dagger V - I|`.
pub fn gram_deviation(v: MatRef<'_, c64>) -> f64 {
    let gram = v.adjoint() * v;
    identity_deviation(gram.as_ref())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("Hermitian eigensolver failed: {e:?}")))?;
    let values = evd.S().column_vector().iter().map(|z| z.re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(m: MatRef<'_, c64>) -> Result<Vec<c64>> {
    m.eigenvalues()
        .map_err(|e| Error::Numerical(format!("eigensolver failed: {e:?}")))
}

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))
}

pub fn diagonal_matrix(entries: &[c64]) -> Mat<c64> {
    let n = entries.len();
    let mut m = Mat::zeros(n, n);
    for (i, &z) in entries.iter().enumerate() {
        m[(i, i)] = z;
    }
    m
}

/// `Q diag(d) Q^dagger`.
pub fn reconstruct(q: MatRef<'_, c64>, d: &[c64]) -> Mat<c64> {
    let scaled = Mat::from_fn(q.nrows(), q.ncols(), |i, j| q[(i, j)] * d[j]);
    scaled * q.adjoint()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> Mat<c64> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn inner(a: &Col<c64>, b: &Col<c64>) -> c64 {
    a.adjoint() * b
}

/// Left-multiplies `v` in place by a diagonal matrix.
pub fn apply_diagonal(diag: &[c64], v: &mut Col<c64>) {
    for (i, d) in diag.iter().enumerate() {
        v[i] *= *d;
    }
}
