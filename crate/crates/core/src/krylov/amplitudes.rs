use faer::{c64, Col, Mat, MatRef};

use super::ArnoldiData;
use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;
use crate::state::StateVector;

/// Krylov-basis amplitudes `ψ_n^j`: row `n` is the Krylov index, column `j` the time step.
#[derive(Debug, Clone)]
pub struct AmplitudeTrajectory {
    psi: Mat<c64>,
    leakage: Option<Vec<f64>>,
}

impl AmplitudeTrajectory {
    pub fn from_matrix(psi: Mat<c64>) -> Self {
        Self { psi, leakage: None }
    }

    pub fn krylov_dim(&self) -> usize {
        self.psi.nrows()
    }

    /// Number of propagation steps; the trajectory holds `steps + 1` columns.
    pub fn steps(&self) -> usize {
        self.psi.ncols() - 1
    }

    pub fn amplitudes(&self) -> MatRef<'_, c64> {
        self.psi.as_ref()
    }

    pub fn amplitude(&self, n: usize, j: usize) -> c64 {
        self.psi[(n, j)]
    }

    /// `|ψ_n^j|²` over `n` at fixed step `j`.
    pub fn probabilities(&self, j: usize) -> Vec<f64> {
        (0..self.krylov_dim()).map(|n| self.psi[(n, j)].norm_sqr()).collect()
    }

    /// Largest `|Σ_n |ψ_n^j|² - 1|` over all steps.
    pub fn norm_defect(&self) -> f64 {
        (0..=self.steps())
            .map(|j| (self.probabilities(j).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Probability outside the Krylov space per step; only recorded when the
    /// Arnoldi iteration stopped on tolerance.
    pub fn leakage(&self) -> Option<&[f64]> {
        self.leakage.as_deref()
    }

    pub fn max_abs_diff(&self, other: &AmplitudeTrajectory) -> f64 {
        crate::linalg::max_abs_diff(self.amplitudes(), other.amplitudes())
    }
}

/// `ψ_n^j = ⟨K_n|U^j|ψ_0⟩` by repeated matvec in the Hilbert space.
pub fn amplitudes_direct(
    u: &FloquetOperator,
    data: &ArnoldiData,
    psi0: &StateVector,
    steps: usize,
) -> Result<AmplitudeTrajectory> {
    let basis = data.basis();
    if u.dim() != basis.nrows() || psi0.dim() != basis.nrows() {
        return Err(Error::DimensionMismatch {
            expected: basis.nrows(),
            found: if u.dim() != basis.nrows() { u.dim() } else { psi0.dim() },
        });
    }
    let overlap: c64 = basis.col(0).adjoint() * psi0.as_col();
    if (overlap - c64::new(1.0, 0.0)).norm() > 1e-10 {
        return Err(Error::InvalidArgument(
            "Arnoldi data was not built from this initial state".into(),
        ));
    }
    let d = data.krylov_dim();
    let mut psi = Mat::<c64>::zeros(d, steps + 1);
    let mut leakage = data.halted_early().then(|| Vec::with_capacity(steps + 1));
    let mut state = psi0.as_col().clone();
    for j in 0..=steps {
        if j > 0 {
            state = u.apply(&state);
        }
        let projected: Col<c64> = basis.adjoint() * &state;
        let mut inside = 0.0;
        for n in 0..d {
            psi[(n, j)] = projected[n];
            inside += projected[n].norm_sqr();
        }
        if let Some(l) = leakage.as_mut() {
            l.push(state.norm_l2().powi(2) - inside);
        }
    }
    Ok(AmplitudeTrajectory { psi, leakage })
}

/// Streams `ψ^{j+1} = h ψ^j` from `ψ^0 = δ_{n0}` without touching Hilbert-space vectors.
pub struct ChainPropagator<'a> {
    h: MatRef<'a, c64>,
    current: Option<Col<c64>>,
}

impl<'a> ChainPropagator<'a> {
    pub fn new(data: &'a ArnoldiData) -> Self {
        let d = data.krylov_dim();
        let mut start = Col::<c64>::zeros(d);
        start[0] = c64::new(1.0, 0.0);
        Self {
            h: data.h(),
            current: Some(start),
        }
    }
}

impl Iterator for ChainPropagator<'_> {
    type Item = Col<c64>;

    fn next(&mut self) -> Option<Col<c64>> {
        let current = self.current.take()?;
        self.current = Some(self.h * &current);
        Some(current)
    }
}

/// Tight-binding propagation on the Krylov chain.
pub fn amplitudes_chain(data: &ArnoldiData, steps: usize) -> AmplitudeTrajectory {
    let d = data.krylov_dim();
    let mut psi = Mat::<c64>::zeros(d, steps + 1);
    for (j, column) in ChainPropagator::new(data).take(steps + 1).enumerate() {
        for n in 0..d {
            psi[(n, j)] = column[n];
        }
    }
    AmplitudeTrajectory { psi, leakage: None }
}
