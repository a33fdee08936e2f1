use faer::c64;

use super::{arnoldi, lanczos, ArnoldiData, LanczosData, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::floquet::{hermitian_expm, FloquetOperator, Space};
use crate::state::StateVector;
use crate::statespace::Operator;

/// Most coefficients compared between the two iterations.
pub const MAX_COMPARED: usize = 50;

/// Side-by-side Arnoldi (on `e^{-iH_0T} e^{-iVT}`) and Lanczos (on `H_0 + V`) coefficients.
#[derive(Debug, Clone)]
pub struct HighFrequencyReport {
    pub period: f64,
    pub arnoldi: ArnoldiData,
    pub lanczos: LanczosData,
    /// `|h_{n,n-1}/T - b_n| / b_n` for `n = 1, 2, …`.
    pub subdiagonal_deviation: Vec<f64>,
    /// `|(1 - h_{n,n})/(iT) - a_n|` for `n = 0, 1, …`.
    pub diagonal_deviation: Vec<f64>,
}

impl HighFrequencyReport {
    /// Median of the first `count` subdiagonal deviations.
    pub fn median_subdiagonal_deviation(&self, count: usize) -> Option<f64> {
        let mut head: Vec<f64> = self.subdiagonal_deviation.iter().take(count).copied().collect();
        if head.is_empty() {
            return None;
        }
        head.sort_by(f64::total_cmp);
        let mid = head.len() / 2;
        Some(if head.len() % 2 == 1 {
            head[mid]
        } else {
            0.5 * (head[mid - 1] + head[mid])
        })
    }
}

pub fn highfreq_comparison(h0: &Operator, v: &Operator, psi0: &StateVector, period: f64) -> Result<HighFrequencyReport> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::InvalidArgument(format!("period must be positive, got {period}")));
    }
    for op in [h0, v] {
        if !op.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: crate::linalg::hermiticity_deviation(op.matrix()),
            });
        }
    }
    let split = hermitian_expm(h0, period)?.matrix() * hermitian_expm(v, period)?.matrix();
    let dim = split.nrows();
    let u = FloquetOperator::from_matrix(split, Space::Custom { dim }, None)?;
    let arnoldi = arnoldi(&u, psi0, DEFAULT_TOL)?;
    let lanczos = lanczos(&h0.add(v)?, psi0, DEFAULT_TOL)?;

    let sub = arnoldi.subdiagonal();
    let subdiagonal_deviation = sub
        .iter()
        .zip(&lanczos.b)
        .take(MAX_COMPARED)
        .map(|(h, b)| (h / period - b).abs() / b)
        .collect();
    let i_t = c64::new(0.0, period);
    let diagonal_deviation = arnoldi
        .diagonal()
        .iter()
        .zip(&lanczos.a)
        .take(MAX_COMPARED)
        .map(|(h, a)| ((c64::new(1.0, 0.0) - h) / i_t - c64::new(*a, 0.0)).norm())
        .collect();

    Ok(HighFrequencyReport {
        period,
        arnoldi,
        lanczos,
        subdiagonal_deviation,
        diagonal_deviation,
    })
}
