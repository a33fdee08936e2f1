//! Quasi-energy level statistics.
//!
//! Floquet spectra live on the unit circle with uniform mean density, so
//! spacings are unfolded by the mean spacing alone and the wrap-around gap
//! between the largest and smallest phase is always included.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::floquet::FloquetOperator;

/// Mean ratio `⟨r̃⟩` for uncorrelated (Poisson) levels.
pub const R_POISSON: f64 = 0.38629;
/// Mean ratio `⟨r̃⟩` for the Gaussian orthogonal ensemble.
pub const R_GOE: f64 = 0.53590;
/// Raw spacings below this count as degeneracies.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Allowed `||λ| - 1|` for eigenvalues of a unitary.
pub const MODULUS_TOL: f64 = 1e-8;

/// Eigenphases of `u` in `[0, 2π)`, ascending.
pub fn quasienergies(u: &FloquetOperator) -> Result<Vec<f64>> {
    let eigs = crate::linalg::eigenvalues(u.matrix())?;
    let mut phases = Vec::with_capacity(eigs.len());
    for z in eigs {
        let modulus = z.norm();
        if (modulus - 1.0).abs() > MODULUS_TOL {
            return Err(Error::Numerical(format!(
                "eigenvalue of modulus {modulus} for a unitary operator"
            )));
        }
        phases.push(wrap_phase(z.im.atan2(z.re)));
    }
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Maps any angle into `[0, 2π)`.
pub fn wrap_phase(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π
    if w >= TAU { 0.0 } else { w }
}

fn check_sorted(phases: &[f64], needed: usize) -> Result<()> {
    if phases.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            available: phases.len(),
        });
    }
    if phases.windows(2).any(|w| w[1] < w[0]) || phases.iter().any(|p| !(0.0..TAU).contains(p)) {
        return Err(Error::InvalidArgument("phases must be sorted and lie in [0, 2π)".into()));
    }
    Ok(())
}

/// The `D` gaps between neighbouring phases, the last one wrapping around the circle.
fn raw_spacings(phases: &[f64]) -> Vec<f64> {
    let d = phases.len();
    let mut gaps: Vec<f64> = phases.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(TAU - (phases[d - 1] - phases[0]));
    gaps
}

/// Spacings scaled to unit mean (`s_n = D/(2π) Δφ_n`).
pub fn normalized_spacings(phases: &[f64]) -> Result<Vec<f64>> {
    check_sorted(phases, 2)?;
    let scale = phases.len() as f64 / TAU;
    Ok(raw_spacings(phases).into_iter().map(|g| g * scale).collect())
}

/// Number of neighbouring phase pairs closer than [`DEGENERACY_TOL`].
pub fn degeneracy_count(phases: &[f64]) -> Result<usize> {
    check_sorted(phases, 2)?;
    Ok(raw_spacings(phases).into_iter().filter(|&g| g < DEGENERACY_TOL).count())
}

fn ratio(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    // two zero gaps in a row: counted as zero
    if hi > 0.0 { a.min(b) / hi } else { 0.0 }
}

/// Circular mean of `min(s_n, s_{n-1}) / max(s_n, s_{n-1})` over all `D` positions.
pub fn r_statistic(phases: &[f64]) -> Result<f64> {
    check_sorted(phases, 3)?;
    let gaps = raw_spacings(phases);
    let d = gaps.len();
    let sum: f64 = (0..d).map(|n| ratio(gaps[n], gaps[(n + d - 1) % d])).sum();
    Ok(sum / d as f64)
}

/// Mean consecutive-gap ratio of an ordered real spectrum, without wrap-around.
pub fn linear_r_statistic(levels: &[f64]) -> Result<f64> {
    if levels.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            available: levels.len(),
        });
    }
    let gaps: Vec<f64> = levels.windows(2).map(|w| w[1] - w[0]).collect();
    if gaps.iter().any(|&g| g < 0.0) {
        return Err(Error::InvalidArgument("levels must be sorted".into()));
    }
    let sum: f64 = gaps.windows(2).map(|w| ratio(w[0], w[1])).sum();
    Ok(sum / (gaps.len() - 1) as f64)
}

/// `(⟨r̃⟩ - r_P) / (r_GOE - r_P)`, not clamped.
pub fn eta(r_mean: f64) -> f64 {
    (r_mean - R_POISSON) / (R_GOE - R_POISSON)
}

pub fn poisson_density(s: f64) -> f64 {
    (-s).exp()
}

/// Wigner surmise `(πs/2) exp(-πs²/4)`.
pub fn wigner_density(s: f64) -> f64 {
    0.5 * PI * s * (-0.25 * PI * s * s).exp()
}

fn poisson_cdf(s: f64) -> f64 {
    1.0 - (-s).exp()
}

fn wigner_cdf(s: f64) -> f64 {
    1.0 - (-0.25 * PI * s * s).exp()
}

/// Upper edge of the spacing histogram; larger spacings land in the last bin.
pub const HISTOGRAM_RANGE: f64 = 4.0;

/// Density histogram of normalized spacings with both reference laws averaged over each bin.
///
/// The last bin doubles as the overflow bin `[s_lo, ∞)`, for the data and the
/// references alike, so all three integrate to one over the nominal widths.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingHistogram {
    /// `bins + 1` ascending edges from 0 to [`HISTOGRAM_RANGE`].
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub poisson: Vec<f64>,
    pub wigner: Vec<f64>,
    /// Spacings beyond the last edge (included in the last bin).
    pub overflow: usize,
}

impl SpacingHistogram {
    pub fn bins(&self) -> usize {
        self.density.len()
    }

    pub fn width(&self, bin: usize) -> f64 {
        self.edges[bin + 1] - self.edges[bin]
    }

    fn l1(&self, reference: &[f64]) -> f64 {
        (0..self.bins())
            .map(|b| (self.density[b] - reference[b]).abs() * self.width(b))
            .sum()
    }

    pub fn l1_to_poisson(&self) -> f64 {
        self.l1(&self.poisson)
    }

    pub fn l1_to_wigner(&self) -> f64 {
        self.l1(&self.wigner)
    }
}

/// Histogram on `[0, HISTOGRAM_RANGE]` with `bins` equal bins.
pub fn spacing_histogram(phases: &[f64], bins: usize) -> Result<SpacingHistogram> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bins, got {bins}")));
    }
    let spacings = normalized_spacings(phases)?;
    let width = HISTOGRAM_RANGE / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|b| b as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for s in &spacings {
        let b = ((s / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let overflow = spacings.iter().filter(|&&s| s >= HISTOGRAM_RANGE).count();
    let total = spacings.len() as f64;
    let density = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    let bin_average = |cdf: fn(f64) -> f64| -> Vec<f64> {
        (0..bins)
            .map(|b| {
                let hi = if b + 1 == bins { 1.0 } else { cdf(edges[b + 1]) };
                (hi - cdf(edges[b])) / width
            })
            .collect()
    };
    Ok(SpacingHistogram {
        poisson: bin_average(poisson_cdf),
        wigner: bin_average(wigner_cdf),
        edges,
        density,
        overflow,
    })
}

/// Level statistics of one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStats {
    pub phases: Vec<f64>,
    pub spacings: Vec<f64>,
    pub r_mean: f64,
    pub eta: f64,
    pub degeneracies: usize,
}

impl SpectralStats {
    pub fn from_phases(phases: Vec<f64>) -> Result<Self> {
        let r_mean = r_statistic(&phases)?;
        Ok(Self {
            spacings: normalized_spacings(&phases)?,
            degeneracies: degeneracy_count(&phases)?,
            eta: eta(r_mean),
            r_mean,
            phases,
        })
    }

    pub fn from_operator(u: &FloquetOperator) -> Result<Self> {
        Self::from_phases(quasienergies(u)?)
    }
}

/// Monte Carlo estimate of a mean ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub r_mean: f64,
    /// Standard error over independent samples (matrices), or the
    /// naive per-ratio error for a single Poisson spectrum.
    pub std_error: f64,
    pub ratios: usize,
}

/// `⟨r̃⟩` of `count` i.i.d. uniform phases.
pub fn calibrate_poisson(count: usize, seed: u64) -> Result<Calibration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut phases: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..TAU)).collect();
    phases.sort_by(f64::total_cmp);
    let r_mean = r_statistic(&phases)?;
    let gaps = raw_spacings(&phases);
    let d = gaps.len();
    let var = (0..d)
        .map(|n| (ratio(gaps[n], gaps[(n + d - 1) % d]) - r_mean).powi(2))
        .sum::<f64>()
        / (d - 1) as f64;
    Ok(Calibration {
        r_mean,
        std_error: (var / d as f64).sqrt(),
        ratios: d,
    })
}

/// Real symmetric matrix with i.i.d. Gaussian entries, `(A + Aᵀ)/2`.
pub fn goe_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat<f64> {
    let a = Mat::<f64>::from_fn(dim, dim, |_, _| rng.sample(StandardNormal));
    Mat::from_fn(dim, dim, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]))
}

/// Linear-spectrum `⟨r̃⟩` from the middle half of `matrices` GOE spectra.
/// Matrix `k` draws from stream `k` of a generator seeded with `seed`, so
/// samples can be produced in any order.
pub fn calibrate_goe(matrices: usize, dim: usize, seed: u64) -> Result<Calibration> {
    calibrate_goe_with(matrices, dim, |k| goe_sample(dim, seed, k))
}

/// Bulk `⟨r̃⟩` of the `k`-th GOE sample.
pub fn goe_sample(dim: usize, seed: u64, k: usize) -> Result<(f64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let levels = crate::linalg::symmetric_eigenvalues(goe_matrix(dim, &mut rng).as_ref())?;
    let bulk = &levels[dim / 4..dim - dim / 4];
    Ok((linear_r_statistic(bulk)?, bulk.len() - 2))
}

/// Combines per-matrix samples produced by `sample(k)` for `k < matrices`.
pub fn calibrate_goe_with(
    matrices: usize,
    dim: usize,
    sample: impl Fn(usize) -> Result<(f64, usize)>,
) -> Result<Calibration> {
    if matrices < 2 || dim < 8 {
        return Err(Error::InvalidArgument(format!(
            "GOE calibration needs at least 2 matrices of dimension 8, got {matrices} of {dim}"
        )));
    }
    let samples = (0..matrices).map(sample).collect::<Result<Vec<_>>>()?;
    combine_samples(&samples)
}

/// Mean and standard error over equally weighted per-matrix means.
pub fn combine_samples(samples: &[(f64, usize)]) -> Result<Calibration> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: samples.len(),
        });
    }
    let means: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let m = means.len() as f64;
    let r_mean = means.iter().sum::<f64>() / m;
    let std = crate::observables::sample_std(&means)?;
    Ok(Calibration {
        r_mean,
        std_error: std / m.sqrt(),
        ratios: samples.iter().map(|s| s.1).sum(),
    })
}
