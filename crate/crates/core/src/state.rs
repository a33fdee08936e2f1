use faer::{c64, Col};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Allowed deviation of `‖ψ‖` from one.
pub const NORM_TOL: f64 = 1e-10;

/// Unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Col<c64>);

impl StateVector {
    /// Wraps an already normalized vector.
    pub fn new(amplitudes: Col<c64>) -> Result<Self> {
        let norm = amplitudes.norm_l2();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Col<c64>) -> Result<Self> {
        let norm = amplitudes.norm_l2();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Degenerate(format!("cannot normalize vector of norm {norm}")));
        }
        Ok(Self(faer::Scale(c64::new(1.0 / norm, 0.0)) * amplitudes))
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} outside dimension {dim}"
            )));
        }
        Ok(Self(Col::from_fn(dim, |i| {
            if i == index { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) }
        })))
    }

    /// Equal real amplitude `1/√dim` on every basis state.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let a = 1.0 / (dim as f64).sqrt();
        Ok(Self(Col::from_fn(dim, |_| c64::new(a, 0.0))))
    }

    /// Haar-distributed state: normalized i.i.d. complex Gaussian amplitudes.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let col = Col::from_fn(dim, |_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            c64::new(re, im)
        });
        Self::normalized(col)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_col(&self) -> &Col<c64> {
        &self.0
    }

    pub fn into_col(self) -> Col<c64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm_l2()
    }

    pub fn inner(&self, other: &StateVector) -> c64 {
        self.0.adjoint() * &other.0
    }

    pub(crate) fn from_col_unchecked(col: Col<c64>) -> Self {
        Self(col)
    }
}
