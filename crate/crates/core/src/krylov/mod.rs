//! Krylov bases for Hermitian generators (Lanczos) and unitary maps (Arnoldi),
//! and the amplitudes of a time-evolved state in those bases.
//!
//! Both iterations keep the full basis and reorthogonalize every new vector
//! against all previous ones, twice, so the basis stays orthonormal to
//! working precision for the dimensions used here (a few thousand).

mod amplitudes;
mod arnoldi;
mod highfreq;
mod lanczos;

pub use amplitudes::{amplitudes_chain, amplitudes_direct, AmplitudeTrajectory, ChainPropagator};
pub use arnoldi::{arnoldi, ArnoldiData};
pub use highfreq::{highfreq_comparison, HighFrequencyReport};
pub use lanczos::{lanczos, LanczosData};

/// Default breakdown tolerance on residual norms (relative to the operator norm).
pub const DEFAULT_TOL: f64 = 1e-12;

use faer::{c64, Col, MatMut, MatRef};

/// Removes the components of `w` along the first `n` columns of `basis`,
/// twice, returning the accumulated projection coefficients.
pub(crate) fn orthogonalize(basis: MatRef<'_, c64>, n: usize, w: &mut Col<c64>) -> Col<c64> {
    let v = basis.subcols(0, n);
    let first: Col<c64> = v.adjoint() * &*w;
    *w = &*w - v * &first;
    let second: Col<c64> = v.adjoint() * &*w;
    *w = &*w - v * &second;
    first + second
}

pub(crate) fn set_column(mut basis: MatMut<'_, c64>, j: usize, values: &Col<c64>, scale: f64) {
    let s = c64::new(scale, 0.0);
    for i in 0..values.nrows() {
        basis[(i, j)] = values[i] * s;
    }
}
