use faer::{c64, Col, Mat, MatRef};

use super::{orthogonalize, set_column};
use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;
use crate::linalg;
use crate::state::StateVector;

/// Arnoldi coefficients `h_{j,k} = ⟨K_j|U|K_k⟩` and the Krylov basis of a unitary map.
#[derive(Debug, Clone)]
pub struct ArnoldiData {
    h: Mat<c64>,
    basis: Mat<c64>,
    halted_early: bool,
}

impl ArnoldiData {
    pub fn krylov_dim(&self) -> usize {
        self.h.nrows()
    }

    /// Upper-Hessenberg `D_K × D_K` coefficient matrix.
    pub fn h(&self) -> MatRef<'_, c64> {
        self.h.as_ref()
    }

    pub fn basis(&self) -> MatRef<'_, c64> {
        self.basis.as_ref()
    }

    /// True when a residual fell below tolerance before the space was exhausted.
    pub fn halted_early(&self) -> bool {
        self.halted_early
    }

    /// Normalization constants `h_{n,n-1}` for `n = 1 … D_K-1`.
    pub fn subdiagonal(&self) -> Vec<f64> {
        (1..self.krylov_dim()).map(|n| self.h[(n, n - 1)].re).collect()
    }

    /// `h_{n,n}` for `n = 0 … D_K-1`.
    pub fn diagonal(&self) -> Vec<c64> {
        (0..self.krylov_dim()).map(|n| self.h[(n, n)]).collect()
    }

    pub fn orthonormality_error(&self) -> f64 {
        linalg::gram_deviation(self.basis())
    }

    /// `max |V^dagger U V - h|`.
    pub fn reconstruction_error(&self, u: &FloquetOperator) -> f64 {
        let v = self.basis();
        let projected = v.adjoint() * u.matrix() * v;
        linalg::max_abs_diff(projected.as_ref(), self.h())
    }

    /// Builds coefficient data directly, e.g. for model Hessenberg matrices.
    pub fn from_hessenberg(h: Mat<c64>) -> Result<Self> {
        let d = h.nrows();
        if d == 0 || h.ncols() != d {
            return Err(Error::InvalidArgument("Hessenberg matrix must be square and non-empty".into()));
        }
        for j in 0..d {
            for i in j + 2..d {
                if h[(i, j)].norm() > 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i}, {j}) below the subdiagonal is non-zero"
                    )));
                }
            }
        }
        Ok(Self {
            h,
            basis: Mat::identity(d, d),
            halted_early: false,
        })
    }
}

/// Arnoldi iteration on a unitary map with one full Gram-Schmidt re-pass per step.
///
/// `h_{n,n-1}` is the residual norm (real, non-negative). The iteration stops
/// when the residual drops below `tol` (`‖U‖ = 1`) or after `dim` vectors.
pub fn arnoldi(u: &FloquetOperator, psi0: &StateVector, tol: f64) -> Result<ArnoldiData> {
    let dim = u.dim();
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi0.dim(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }

    let mut basis = Mat::<c64>::zeros(dim, dim);
    let mut h = Mat::<c64>::zeros(dim, dim);
    set_column(basis.as_mut(), 0, psi0.as_col(), 1.0);
    let mut krylov_dim = dim;
    let mut halted_early = false;

    for n in 1..=dim {
        let previous = basis.col(n - 1).to_owned();
        let mut w: Col<c64> = u.matrix() * &previous;
        let coeffs = orthogonalize(basis.as_ref(), n, &mut w);
        for j in 0..n {
            h[(j, n - 1)] = coeffs[j];
        }
        if n == dim {
            break;
        }
        let residual = w.norm_l2();
        if residual < tol {
            krylov_dim = n;
            halted_early = true;
            break;
        }
        h[(n, n - 1)] = c64::new(residual, 0.0);
        set_column(basis.as_mut(), n, &w, 1.0 / residual);
    }

    Ok(ArnoldiData {
        h: h.submatrix(0, 0, krylov_dim, krylov_dim).to_owned(),
        basis: basis.subcols(0, krylov_dim).to_owned(),
        halted_early,
    })
}
