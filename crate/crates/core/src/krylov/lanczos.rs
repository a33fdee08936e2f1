use faer::{c64, Col, Mat, MatRef};

use super::{orthogonalize, set_column};
use crate::error::{Error, Result};
use crate::linalg;
use crate::state::StateVector;
use crate::statespace::Operator;

/// Lanczos coefficients and basis of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct LanczosData {
    /// Diagonal `a_0 … a_{D_K-1}`.
    pub a: Vec<f64>,
    /// Off-diagonal `b_1 … b_{D_K-1}`, all positive.
    pub b: Vec<f64>,
    basis: Mat<c64>,
}

impl LanczosData {
    pub fn krylov_dim(&self) -> usize {
        self.a.len()
    }

    /// Columns are the Krylov vectors `|K_0⟩ … |K_{D_K-1}⟩`.
    pub fn basis(&self) -> MatRef<'_, c64> {
        self.basis.as_ref()
    }

    /// Dense tridiagonal matrix built from `a` and `b`.
    pub fn tridiagonal(&self) -> Mat<c64> {
        let d = self.krylov_dim();
        Mat::from_fn(d, d, |i, j| {
            if i == j {
                c64::new(self.a[i], 0.0)
            } else if i + 1 == j {
                c64::new(self.b[i], 0.0)
            } else if j + 1 == i {
                c64::new(self.b[j], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        })
    }

    pub fn orthonormality_error(&self) -> f64 {
        linalg::gram_deviation(self.basis())
    }

    /// `max |V^dagger H V - tridiag(a, b)|`.
    pub fn reconstruction_error(&self, h: &Operator) -> f64 {
        let v = self.basis();
        let projected = v.adjoint() * h.matrix() * v;
        linalg::max_abs_diff(projected.as_ref(), self.tridiagonal().as_ref())
    }
}

/// Three-term Lanczos recursion with full reorthogonalization.
///
/// Halts when `b_{n+1} < tol · ‖H‖_F` or the space is exhausted.
pub fn lanczos(h: &Operator, psi0: &StateVector, tol: f64) -> Result<LanczosData> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: linalg::hermiticity_deviation(h.matrix()),
        });
    }
    let dim = h.dim();
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi0.dim(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let threshold = tol * h.matrix().norm_l2().max(f64::MIN_POSITIVE);

    let mut basis = Mat::<c64>::zeros(dim, dim);
    set_column(basis.as_mut(), 0, psi0.as_col(), 1.0);
    let mut a = Vec::new();
    let mut b: Vec<f64> = Vec::new();

    for n in 0..dim {
        let current = basis.col(n).to_owned();
        let mut w: Col<c64> = h.matrix() * &current;
        let an = (current.adjoint() * &w).re;
        a.push(an);
        w = &w - faer::Scale(c64::new(an, 0.0)) * &current;
        if n > 0 {
            let prev = basis.col(n - 1).to_owned();
            w = &w - faer::Scale(c64::new(b[n - 1], 0.0)) * &prev;
        }
        orthogonalize(basis.as_ref(), n + 1, &mut w);
        let next = w.norm_l2();
        if n + 1 == dim || next < threshold {
            break;
        }
        b.push(next);
        set_column(basis.as_mut(), n + 1, &w, 1.0 / next);
    }

    let d = a.len();
    Ok(LanczosData {
        a,
        b,
        basis: basis.subcols(0, d).to_owned(),
    })
}
