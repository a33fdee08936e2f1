//! Diagnostics computed from Krylov amplitudes and time-evolved states.

use faer::{c64, Col};

use crate::error::{Error, Result};
use crate::floquet::{evolution, FloquetOperator};
use crate::krylov::{AmplitudeTrajectory, ArnoldiData, ChainPropagator};
use crate::state::StateVector;
use crate::statespace::Operator;

/// Slack allowed on the linear-growth bound `m ≤ 1`.
pub const SLOPE_BOUND_TOL: f64 = 1e-6;

/// Default number of kicks discarded before time-averaging: `2·D_K`.
pub fn default_burn_in(krylov_dim: usize) -> usize {
    2 * krylov_dim
}

/// Default averaging window: `10·D_K` kicks.
pub fn default_window(krylov_dim: usize) -> usize {
    10 * krylov_dim
}

/// Default slope-fit window: `min(20, ⌊D_K/4⌋)`, but never below two points.
pub fn default_slope_window(krylov_dim: usize) -> usize {
    (krylov_dim / 4).clamp(2, 20)
}

fn complexity_of(probs: impl Iterator<Item = f64>) -> f64 {
    probs.enumerate().map(|(n, p)| n as f64 * p).sum()
}

fn entropy_of(probs: impl Iterator<Item = f64>) -> f64 {
    -probs.filter(|&p| p > 0.0).map(|p| p * p.ln()).sum::<f64>()
}

/// `C_j = Σ_n n |ψ_n^j|²`.
pub fn spread_complexity(traj: &AmplitudeTrajectory) -> Vec<f64> {
    let psi = traj.amplitudes();
    (0..psi.ncols())
        .map(|j| complexity_of((0..psi.nrows()).map(|n| psi[(n, j)].norm_sqr())))
        .collect()
}

/// `S_j = -Σ_n p ln p` with `p = |ψ_n^j|²` and `0 ln 0 = 0`.
pub fn spread_entropy(traj: &AmplitudeTrajectory) -> Vec<f64> {
    let psi = traj.amplitudes();
    (0..psi.ncols())
        .map(|j| entropy_of((0..psi.nrows()).map(|n| psi[(n, j)].norm_sqr())))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexitySeries {
    pub complexity: Vec<f64>,
    pub entropy: Vec<f64>,
    pub steps: usize,
}

impl ComplexitySeries {
    pub fn from_trajectory(traj: &AmplitudeTrajectory) -> Self {
        Self {
            complexity: spread_complexity(traj),
            entropy: spread_entropy(traj),
            steps: traj.steps(),
        }
    }

    /// Largest `C_j - j`; non-positive when the linear bound holds.
    pub fn max_excess_over_linear(&self) -> f64 {
        self.complexity
            .iter()
            .enumerate()
            .map(|(j, c)| c - j as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_horizon(available: usize, burn_in: usize, window: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::InvalidArgument("averaging window must be positive".into()));
    }
    let needed = burn_in + window + 1;
    if available < needed {
        return Err(Error::InsufficientData { needed, available });
    }
    Ok(())
}

/// `Σ_n n ⟨|ψ_n|²⟩` with the time average over steps `burn_in ..= burn_in + window`.
pub fn saturation_value(traj: &AmplitudeTrajectory, burn_in: usize, window: usize) -> Result<f64> {
    check_horizon(traj.steps() + 1, burn_in, window)?;
    let psi = traj.amplitudes();
    let d = psi.nrows();
    let mut avg = vec![0.0; d];
    for j in burn_in..=burn_in + window {
        for (n, a) in avg.iter_mut().enumerate() {
            *a += psi[(n, j)].norm_sqr();
        }
    }
    let count = (window + 1) as f64;
    Ok(complexity_of(avg.into_iter().map(|a| a / count)))
}

/// Same as [`saturation_value`], but propagates on the Krylov chain without
/// storing the trajectory.
pub fn saturation_streaming(data: &ArnoldiData, burn_in: usize, window: usize) -> Result<f64> {
    if window == 0 {
        return Err(Error::InvalidArgument("averaging window must be positive".into()));
    }
    let d = data.krylov_dim();
    let mut avg = vec![0.0; d];
    for column in ChainPropagator::new(data).skip(burn_in).take(window + 1) {
        for (n, a) in avg.iter_mut().enumerate() {
            *a += column[n].norm_sqr();
        }
    }
    let count = (window + 1) as f64;
    Ok(complexity_of(avg.into_iter().map(|a| a / count)))
}

/// Sample standard deviations of the Arnoldi coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionStats {
    pub sigma_sub: f64,
    pub sigma_diag_re: f64,
    pub sigma_diag_im: f64,
}

/// Sample standard deviation (`ddof = 1`); needs at least two values.
pub fn sample_std(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: values.len(),
        });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    Ok((ss / (n - 1.0)).sqrt())
}

pub fn dispersion(data: &ArnoldiData) -> Result<DispersionStats> {
    let d = data.krylov_dim();
    if d < 2 {
        return Err(Error::InsufficientData { needed: 2, available: d });
    }
    let sub = data.subdiagonal();
    let diag = data.diagonal();
    let re: Vec<f64> = diag.iter().map(|z| z.re).collect();
    let im: Vec<f64> = diag.iter().map(|z| z.im).collect();
    // a single subdiagonal entry has no spread
    let sigma_sub = if sub.len() < 2 { 0.0 } else { sample_std(&sub)? };
    Ok(DispersionStats {
        sigma_sub,
        sigma_diag_re: sample_std(&re)?,
        sigma_diag_im: sample_std(&im)?,
    })
}

/// Affine map of `values` onto `[0, 1]`.
pub fn rescale(values: &[f64]) -> Result<Vec<f64>> {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if !(hi > lo) || !(hi - lo).is_finite() {
        return Err(Error::Degenerate(format!(
            "cannot rescale a sequence with range [{lo}, {hi}]"
        )));
    }
    Ok(values.iter().map(|v| (v - lo) / (hi - lo)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `slope ≤ 1 + SLOPE_BOUND_TOL`.
    pub within_bound: bool,
}

/// Least-squares line through `(j, C_j)` for `j < window`.
pub fn slope_fit(complexity: &[f64], window: usize) -> Result<SlopeFit> {
    if window < 2 || complexity.len() < window {
        return Err(Error::InsufficientData {
            needed: window.max(2),
            available: complexity.len().min(window),
        });
    }
    let n = window as f64;
    let xbar = (n - 1.0) / 2.0;
    let ybar = complexity[..window].iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (j, &c) in complexity[..window].iter().enumerate() {
        let dx = j as f64 - xbar;
        sxy += dx * (c - ybar);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    Ok(SlopeFit {
        slope,
        intercept: ybar - slope * xbar,
        within_bound: slope <= 1.0 + SLOPE_BOUND_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Magnetization {
    /// `⟨ψ_j|J_z|ψ_j⟩` for `j = 0..=steps`.
    pub series: Vec<f64>,
    /// Mean of the whole series.
    pub average: f64,
}

impl Magnetization {
    /// Mean over steps `burn_in ..= burn_in + window`.
    pub fn windowed_average(&self, burn_in: usize, window: usize) -> Result<f64> {
        check_horizon(self.series.len(), burn_in, window)?;
        let slice = &self.series[burn_in..=burn_in + window];
        Ok(slice.iter().sum::<f64>() / slice.len() as f64)
    }
}

pub fn magnetization_series(
    u: &FloquetOperator,
    psi0: &StateVector,
    jz: &Operator,
    steps: usize,
) -> Result<Magnetization> {
    if jz.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: jz.dim(),
        });
    }
    if !jz.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: crate::linalg::hermiticity_deviation(jz.matrix()),
        });
    }
    let series: Vec<f64> = evolution(u, psi0)?
        .take(steps + 1)
        .map(|psi| {
            let jpsi: Col<c64> = jz.matrix() * &psi;
            let value: c64 = psi.adjoint() * &jpsi;
            value.re
        })
        .collect();
    let average = series.iter().sum::<f64>() / series.len() as f64;
    Ok(Magnetization { series, average })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{build_kicked_ising, build_self_dual, hermitian_expm, polarized_state, DriveParams, Space};
    use crate::krylov::{amplitudes_chain, amplitudes_direct, arnoldi, DEFAULT_TOL};
    use crate::statespace::{parity_sector, project_operator, total_spin_operator, Axis, SpinBasis, SymmetryCheck};
    use approx::assert_abs_diff_eq;
    use faer::Mat;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_distr::StandardNormal;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn shift_trajectory(d: usize, steps: usize) -> AmplitudeTrajectory {
        AmplitudeTrajectory::from_matrix(Mat::from_fn(d, steps + 1, |n, j| {
            if n == j % d { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) }
        }))
    }

    fn kicked_ising_sector(n: usize, tilt: f64) -> (FloquetOperator, StateVector, SpinBasis) {
        let basis = SpinBasis::new(n).unwrap();
        let sector = parity_sector(&basis);
        let u = build_kicked_ising(&basis, &DriveParams::new(1.0, 1.0, tilt), Some(&sector)).unwrap();
        let psi = polarized_state(&basis, Some(&sector)).unwrap();
        (u, psi, basis)
    }

    #[test]
    fn delta_walk_saturates_linear_bound() {
        let traj = shift_trajectory(8, 7);
        let s = ComplexitySeries::from_trajectory(&traj);
        for j in 0..8 {
            assert_abs_diff_eq!(s.complexity[j], j as f64);
            assert_abs_diff_eq!(s.entropy[j], 0.0);
        }
        assert_abs_diff_eq!(s.max_excess_over_linear(), 0.0);
    }

    #[test]
    fn one_dimensional_space_has_no_complexity() {
        let traj = AmplitudeTrajectory::from_matrix(Mat::from_fn(1, 5, |_, _| c64::new(0.0, 1.0)));
        assert!(spread_complexity(&traj).iter().all(|&c| c == 0.0));
        assert!(spread_entropy(&traj).iter().all(|&c| c == 0.0));
        assert_eq!(saturation_value(&traj, 1, 2).unwrap(), 0.0);
    }

    #[test]
    fn uniform_and_two_level_distributions() {
        let d = 6;
        let a = 1.0 / (d as f64).sqrt();
        let traj = AmplitudeTrajectory::from_matrix(Mat::from_fn(d, 1, |_, _| c64::new(a, 0.0)));
        assert_abs_diff_eq!(spread_complexity(&traj)[0], (d as f64 - 1.0) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spread_entropy(&traj)[0], (d as f64).ln(), epsilon = 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let pair = AmplitudeTrajectory::from_matrix(Mat::from_fn(2, 1, |_, _| c64::new(h, 0.0)));
        assert_abs_diff_eq!(spread_entropy(&pair)[0], 2f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn saturation_over_full_cycle() {
        let d = 7;
        let traj = shift_trajectory(d, 40);
        // window d - 1 covers exactly d steps, one full cycle
        let c = saturation_value(&traj, 3, d - 1).unwrap();
        assert_abs_diff_eq!(c, (d as f64 - 1.0) / 2.0, epsilon = 1e-12);
        assert!(matches!(
            saturation_value(&traj, 30, 20),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn streaming_saturation_matches_stored() {
        let (u, psi, _) = kicked_ising_sector(6, FRAC_PI_3);
        let data = arnoldi(&u, &psi, DEFAULT_TOL).unwrap();
        let d = data.krylov_dim();
        let (burn, window) = (default_burn_in(d), default_window(d));
        let traj = amplitudes_chain(&data, burn + window);
        let stored = saturation_value(&traj, burn, window).unwrap();
        let streamed = saturation_streaming(&data, burn, window).unwrap();
        assert_abs_diff_eq!(stored, streamed, epsilon = 1e-12);
    }

    #[test]
    fn saturation_is_stationary_in_window() {
        let (u, psi, _) = kicked_ising_sector(8, FRAC_PI_3);
        let data = arnoldi(&u, &psi, DEFAULT_TOL).unwrap();
        let d = data.krylov_dim();
        let short = saturation_streaming(&data, default_burn_in(d), default_window(d)).unwrap();
        let long = saturation_streaming(&data, default_burn_in(d), 2 * default_window(d)).unwrap();
        assert!((short - long).abs() / long < 0.02, "{short} vs {long}");
    }

    #[test]
    fn dispersion_two_point_and_flat() {
        // Hessenberg with subdiagonal {0.5, 1.5} and diagonal {0, 1, 0}
        let mut h = Mat::<c64>::zeros(3, 3);
        h[(1, 0)] = c64::new(0.5, 0.0);
        h[(2, 1)] = c64::new(1.5, 0.0);
        h[(1, 1)] = c64::new(1.0, 0.0);
        let data = ArnoldiData::from_hessenberg(h).unwrap();
        let s = dispersion(&data).unwrap();
        assert_abs_diff_eq!(s.sigma_sub, 0.5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.sigma_diag_re, (1.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_eq!(s.sigma_diag_im, 0.0);

        let u = build_self_dual(4).unwrap();
        let basis = SpinBasis::new(4).unwrap();
        let data = arnoldi(&u, &polarized_state(&basis, None).unwrap(), DEFAULT_TOL).unwrap();
        assert!(dispersion(&data).unwrap().sigma_sub >= 0.0);

        let one = ArnoldiData::from_hessenberg(Mat::from_fn(1, 1, |_, _| c64::new(1.0, 0.0))).unwrap();
        assert!(dispersion(&one).is_err());
    }

    #[test]
    fn sample_std_two_points() {
        assert_abs_diff_eq!(sample_std(&[0.0, 1.0]).unwrap(), 0.5f64.sqrt(), epsilon = 1e-15);
        assert_eq!(sample_std(&[3.0; 5]).unwrap(), 0.0);
        assert!(sample_std(&[1.0]).is_err());
    }

    #[test]
    fn near_integrable_coefficients_fluctuate_more() {
        let (u, psi, _) = kicked_ising_sector(8, PI / 30.0);
        let regular = dispersion(&arnoldi(&u, &psi, DEFAULT_TOL).unwrap()).unwrap();
        let (u, psi, _) = kicked_ising_sector(8, FRAC_PI_3);
        let chaotic = dispersion(&arnoldi(&u, &psi, DEFAULT_TOL).unwrap()).unwrap();
        assert!(regular.sigma_sub > chaotic.sigma_sub);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale(&[2.0, 4.0, 6.0]).unwrap(), vec![0.0, 0.5, 1.0]);
        let unit = vec![0.0, 0.25, 1.0, 0.5];
        assert_eq!(rescale(&unit).unwrap(), unit);
        assert!(matches!(rescale(&[3.0, 3.0]), Err(Error::Degenerate(_))));
        assert!(rescale(&[]).is_err());
    }

    #[test]
    fn slope_examples() {
        let linear: Vec<f64> = (0..30).map(|j| j as f64).collect();
        let fit = slope_fit(&linear, 20).unwrap();
        assert_abs_diff_eq!(fit.slope, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fit.intercept, 0.0, epsilon = 1e-12);
        assert!(fit.within_bound);

        let flat = slope_fit(&[0.0; 10], 10).unwrap();
        assert_eq!(flat.slope, 0.0);

        let steep: Vec<f64> = (0..5).map(|j| 2.0 * j as f64).collect();
        assert!(!slope_fit(&steep, 5).unwrap().within_bound);
        assert!(slope_fit(&linear, 1).is_err());
        assert!(slope_fit(&linear[..4], 5).is_err());
    }

    #[test]
    fn shift_hessenberg_gives_unit_slope() {
        let d = 16;
        let h = Mat::from_fn(d, d, |i, j| {
            if i == (j + 1) % d { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) }
        });
        let data = ArnoldiData::from_hessenberg(h).unwrap();
        let c = spread_complexity(&amplitudes_chain(&data, 12));
        assert_abs_diff_eq!(slope_fit(&c, 10).unwrap().slope, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn default_windows() {
        assert_eq!(default_slope_window(528), 20);
        assert_eq!(default_slope_window(40), 10);
        assert_eq!(default_slope_window(3), 2);
        assert_eq!(default_burn_in(10), 20);
        assert_eq!(default_window(10), 100);
    }

    #[test]
    fn identity_keeps_full_magnetization() {
        let n = 5;
        let basis = SpinBasis::new(n).unwrap();
        let dim = basis.dim();
        let u = FloquetOperator::from_matrix(Mat::identity(dim, dim), Space::Full { num_sites: n }, None).unwrap();
        let psi = polarized_state(&basis, None).unwrap();
        let jz = total_spin_operator(&basis, Axis::Z);
        let m = magnetization_series(&u, &psi, &jz, 10).unwrap();
        assert_eq!(m.series.len(), 11);
        assert!(m.series.iter().all(|&v| (v - n as f64).abs() < 1e-12));
        assert_abs_diff_eq!(m.windowed_average(2, 5).unwrap(), n as f64, epsilon = 1e-12);
    }

    #[test]
    fn magnetization_decays_when_chaotic() {
        let (u, psi, basis) = kicked_ising_sector(8, FRAC_PI_3);
        let sector = parity_sector(&basis);
        let jz = project_operator(&total_spin_operator(&basis, Axis::Z), &sector, SymmetryCheck::Enforce).unwrap();
        let chaotic = magnetization_series(&u, &psi, &jz, 200).unwrap();
        assert!(chaotic.windowed_average(40, 150).unwrap().abs() < 1.0);

        let (u, psi, _) = kicked_ising_sector(8, PI / 30.0);
        let regular = magnetization_series(&u, &psi, &jz, 200).unwrap();
        assert!(regular.average > 4.0);

        let wrong = total_spin_operator(&basis, Axis::Z);
        assert!(magnetization_series(&u, &psi, &wrong, 3).is_err());
    }

    fn random_unitary(dim: usize, seed: u64) -> FloquetOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Mat::from_fn(dim, dim, |_, _| {
            c64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let h = Operator::hermitian(Mat::from_fn(dim, dim, |i, j| g[(i, j)] + g[(j, i)].conj())).unwrap();
        let u = hermitian_expm(&h, 1.0).unwrap();
        FloquetOperator::from_matrix(u.into_matrix(), Space::Custom { dim }, None).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn complexity_and_entropy_bounds(dim in 2usize..24, seed in any::<u64>(), steps in 1usize..60) {
            let u = random_unitary(dim, seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let psi = StateVector::haar_random(dim, &mut rng).unwrap();
            let data = arnoldi(&u, &psi, DEFAULT_TOL).unwrap();
            let d = data.krylov_dim();
            let chain = amplitudes_chain(&data, steps);
            let direct = amplitudes_direct(&u, &data, &psi, steps).unwrap();
            let series = ComplexitySeries::from_trajectory(&chain);
            for (j, (&c, &s)) in series.complexity.iter().zip(&series.entropy).enumerate() {
                prop_assert!(c <= j as f64 + 1e-9);
                prop_assert!(c >= -1e-12 && c <= d as f64 - 1.0 + 1e-9);
                prop_assert!(s >= -1e-12 && s <= (d as f64).ln() + 1e-9);
            }
            let cd = spread_complexity(&direct);
            let sd = spread_entropy(&direct);
            for j in 0..=steps {
                prop_assert!((cd[j] - series.complexity[j]).abs() < 1e-7);
                prop_assert!((sd[j] - series.entropy[j]).abs() < 1e-7);
            }
        }

        #[test]
        fn rescale_preserves_extrema(values in prop::collection::vec(-1e6f64..1e6, 2..40)) {
            let argmax = |v: &[f64]| v.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|p| p.0);
            let argmin = |v: &[f64]| v.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|p| p.0);
            match rescale(&values) {
                Ok(r) => {
                    prop_assert_eq!(argmax(&r), argmax(&values));
                    prop_assert_eq!(argmin(&r), argmin(&values));
                    prop_assert!(r.iter().all(|&x| (0.0..=1.0).contains(&x)));
                }
                Err(_) => prop_assert!(values.iter().all(|&v| v == values[0])),
            }
        }
    }
}
