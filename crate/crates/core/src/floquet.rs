//! One-period propagators for the kicked models.
//!
//! Every exponent is multiplied by the drive period `T`, so the kicked Ising
//! map is `exp(-i T H_Ising) exp(-i T V_kick)` and `T -> 0` approaches the
//! identity.

use faer::{c64, Col, Mat, MatRef};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::linalg::{self, cis};
use crate::state::StateVector;
use crate::statespace::{
    angular_momentum_operators, project_operator, Operator, SectorBasis, Spin, SpinBasis,
    SymmetryCheck,
};

/// Allowed `max |U^dagger U - I|` for anything accepted as a Floquet operator.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Couplings of the (possibly non-local) kicked Ising chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Nearest-neighbour Ising coupling `J`.
    pub coupling: f64,
    /// Kick field magnitude `b`.
    pub field: f64,
    /// Field tilt `phi` away from the z axis, in `[0, π/2]`.
    pub tilt: f64,
    /// Uniform all-to-all Ising coupling `γ`; zero for the local chain.
    pub nonlocal: f64,
    /// Drive period `T`.
    pub period: f64,
}

impl DriveParams {
    pub fn new(coupling: f64, field: f64, tilt: f64) -> Self {
        Self {
            coupling,
            field,
            tilt,
            nonlocal: 0.0,
            period: 1.0,
        }
    }

    pub fn with_nonlocal(mut self, gamma: f64) -> Self {
        self.nonlocal = gamma;
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = period;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.coupling, self.field, self.tilt, self.nonlocal, self.period];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("drive parameters must be finite".into()));
        }
        if self.period <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "drive period must be positive, got {}",
                self.period
            )));
        }
        if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&self.tilt) {
            return Err(Error::InvalidArgument(format!(
                "tilt angle must lie in [0, π/2], got {}",
                self.tilt
            )));
        }
        Ok(())
    }
}

/// Kicked Bose-Hubbard dimer in its spin-j representation (`N = 2j` bosons).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerParams {
    pub spin: Spin,
    /// On-site interaction `k = 2U`.
    pub interaction: f64,
    /// Kick strength `μ`.
    pub kick: f64,
    pub period: f64,
}

impl DimerParams {
    pub fn validate(&self) -> Result<()> {
        if self.spin.twice() == 0 {
            return Err(Error::InvalidArgument("dimer needs 2j >= 1".into()));
        }
        if ![self.interaction, self.kick, self.period].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("dimer parameters must be finite".into()));
        }
        if self.period <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "drive period must be positive, got {}",
                self.period
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelParams {
    KickedIsing(DriveParams),
    SelfDual,
    Dimer(DimerParams),
}

/// Basis a Floquet matrix acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Full { num_sites: usize },
    ParitySector { num_sites: usize },
    SpinJ { spin: Spin },
    Custom { dim: usize },
}

/// Dense unitary one-period propagator.
#[derive(Debug, Clone)]
pub struct FloquetOperator {
    matrix: Mat<c64>,
    space: Space,
    params: Option<ModelParams>,
}

impl FloquetOperator {
    /// Accepts `matrix` after checking `U^dagger U = I`.
    pub fn from_matrix(matrix: Mat<c64>, space: Space, params: Option<ModelParams>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = linalg::unitarity_deviation(matrix.as_ref());
        if deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            matrix,
            space,
            params,
        })
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    /// Restricts a full-space chain operator to the positive-parity sector.
    pub fn restrict_to(&self, sector: &SectorBasis) -> Result<FloquetOperator> {
        match self.space {
            Space::Full { num_sites } if num_sites == sector.parent().num_sites() => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "only full-chain operators over the sector's parent can be restricted".into(),
                ))
            }
        }
        let op = Operator::general(self.matrix.clone());
        let projected = project_operator(&op, sector, SymmetryCheck::Enforce)?;
        FloquetOperator::from_matrix(
            projected.into_matrix(),
            Space::ParitySector {
                num_sites: sector.parent().num_sites(),
            },
            self.params,
        )
    }

    pub fn apply(&self, psi: &Col<c64>) -> Col<c64> {
        &self.matrix * psi
    }
}

/// 2×2 rotation `exp(-i θ n·σ) = cos θ I - i sin θ n·σ` with `n = (sin φ, 0, cos φ)`,
/// in the `(↑, ↓)` basis.
fn tilted_rotation(theta: f64, tilt: f64) -> Mat<c64> {
    let (s, c) = theta.sin_cos();
    let (nx, nz) = (tilt.sin(), tilt.cos());
    // n·σ = [[nz, nx], [nx, -nz]]
    let mut u = Mat::<c64>::zeros(2, 2);
    u[(0, 0)] = c64::new(c, -s * nz);
    u[(1, 1)] = c64::new(c, s * nz);
    u[(0, 1)] = c64::new(0.0, -s * nx);
    u[(1, 0)] = c64::new(0.0, -s * nx);
    u
}

/// `⊗_i exp(-i T b (sin φ σ_i^x + cos φ σ_i^z))`, built site by site.
pub fn kick_unitary(basis: &SpinBasis, field: f64, tilt: f64, period: f64) -> Operator {
    let single = tilted_rotation(period * field, tilt);
    let mut u = single.clone();
    for _ in 1..basis.num_sites() {
        u = linalg::kron(u.as_ref(), single.as_ref());
    }
    Operator::general(u)
}

/// Diagonal of `J Σ_{i<N} z_i z_{i+1} + γ Σ_{i<j} z_i z_j` over the open chain.
pub fn ising_energies(basis: &SpinBasis, coupling: f64, nonlocal: f64) -> Vec<f64> {
    let n = basis.num_sites();
    (0..basis.dim())
        .map(|s| {
            let z: Vec<f64> = (1..=n).map(|site| basis.z_value(s, site) as f64).collect();
            let local: f64 = z.windows(2).map(|w| w[0] * w[1]).sum();
            let total: f64 = z.iter().sum();
            // Σ_{i<j} z_i z_j = (M^2 - N) / 2
            let all_pairs = (total * total - n as f64) / 2.0;
            coupling * local + nonlocal * all_pairs
        })
        .collect()
}

fn ising_phases(basis: &SpinBasis, coupling: f64, nonlocal: f64, period: f64) -> Vec<c64> {
    ising_energies(basis, coupling, nonlocal)
        .into_iter()
        .map(|e| cis(-period * e))
        .collect()
}

/// Diagonal unitary `exp(-i T [J Σ z_i z_{i+1} + γ Σ_{i<j} z_i z_j])`.
pub fn ising_diagonal_unitary(basis: &SpinBasis, coupling: f64, nonlocal: f64, period: f64) -> Operator {
    Operator::general(linalg::diagonal_matrix(&ising_phases(basis, coupling, nonlocal, period)))
}

/// Ising part `H_0` as a Hermitian operator.
pub fn ising_hamiltonian(basis: &SpinBasis, coupling: f64, nonlocal: f64) -> Operator {
    let diag: Vec<c64> = ising_energies(basis, coupling, nonlocal)
        .into_iter()
        .map(|e| c64::new(e, 0.0))
        .collect();
    Operator::hermitian(linalg::diagonal_matrix(&diag)).expect("real diagonal is Hermitian")
}

/// Kick part `V = b Σ_i (sin φ σ_i^x + cos φ σ_i^z)`.
pub fn field_hamiltonian(basis: &SpinBasis, field: f64, tilt: f64) -> Operator {
    use crate::statespace::{total_spin_operator, Axis};
    let x = total_spin_operator(basis, Axis::X).scaled(field * tilt.sin());
    let z = total_spin_operator(basis, Axis::Z).scaled(field * tilt.cos());
    x.add(&z).expect("same basis")
}

/// Scales row `i` of `m` by `d[i]`, i.e. `diag(d) · m`.
fn scale_rows(d: &[c64], mut m: Mat<c64>) -> Mat<c64> {
    for j in 0..m.ncols() {
        for (i, di) in d.iter().enumerate() {
            m[(i, j)] *= *di;
        }
    }
    m
}

/// Scales column `j` of `m` by `d[j]`, i.e. `m · diag(d)`.
fn scale_cols(mut m: Mat<c64>, d: &[c64]) -> Mat<c64> {
    for (j, dj) in d.iter().enumerate() {
        for i in 0..m.nrows() {
            m[(i, j)] *= *dj;
        }
    }
    m
}

/// `U_F = exp(-i T H_Ising) · exp(-i T V_kick)`, optionally restricted to the parity sector.
pub fn build_kicked_ising(
    basis: &SpinBasis,
    params: &DriveParams,
    sector: Option<&SectorBasis>,
) -> Result<FloquetOperator> {
    params.validate()?;
    let kick = kick_unitary(basis, params.field, params.tilt, params.period);
    let phases = ising_phases(basis, params.coupling, params.nonlocal, params.period);
    let u = scale_rows(&phases, kick.into_matrix());
    let full = FloquetOperator::from_matrix(
        u,
        Space::Full {
            num_sites: basis.num_sites(),
        },
        Some(ModelParams::KickedIsing(*params)),
    )?;
    match sector {
        None => Ok(full),
        Some(sector) => {
            if sector.parent() != basis {
                return Err(Error::DimensionMismatch {
                    expected: basis.dim(),
                    found: sector.parent().dim(),
                });
            }
            full.restrict_to(sector)
        }
    }
}

/// Self-dual kicked Ising chain, `h_x = h_z = J = π/4`:
/// `exp(-i h_x Σ σ^x) · exp(-i J Σ_{i<N} σ^z σ^z - i h_z Σ σ^z)`.
pub fn build_self_dual(num_sites: usize) -> Result<FloquetOperator> {
    if num_sites < 2 {
        return Err(Error::InvalidArgument(format!(
            "self-dual chain needs at least 2 sites, got {num_sites}"
        )));
    }
    let basis = SpinBasis::new(num_sites)?;
    let kick = kick_unitary(&basis, FRAC_PI_4, FRAC_PI_2, 1.0);
    let phases: Vec<c64> = ising_energies(&basis, FRAC_PI_4, 0.0)
        .into_iter()
        .enumerate()
        .map(|(s, e)| {
            let magnetization: i32 = (1..=num_sites).map(|site| basis.z_value(s, site)).sum();
            cis(-(e + FRAC_PI_4 * magnetization as f64))
        })
        .collect();
    FloquetOperator::from_matrix(
        scale_cols(kick.into_matrix(), &phases),
        Space::Full { num_sites },
        Some(ModelParams::SelfDual),
    )
}

/// `exp(-i t H)` via `H = Q Λ Q^dagger`.
pub fn hermitian_expm(h: &Operator, t: f64) -> Result<Operator> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: linalg::hermiticity_deviation(h.matrix()),
        });
    }
    let (values, q) = linalg::hermitian_eigen(h.matrix())?;
    let phases: Vec<c64> = values.iter().map(|&e| cis(-t * e)).collect();
    Ok(Operator::general(linalg::reconstruct(q.as_ref(), &phases)))
}

/// `U_F = exp(-i T μ J_z) · exp(-i T (2 J_x + (k/N) J_z^2))` with `N = 2j`.
pub fn build_dimer_floquet(params: &DimerParams) -> Result<FloquetOperator> {
    params.validate()?;
    let spin = params.spin;
    let am = angular_momentum_operators(spin);
    let n = spin.twice() as f64;
    let jz2 = am.jz.matrix() * am.jz.matrix();
    let hopping = am.jx.scaled(2.0);
    let interaction = Operator::hermitian(faer::Scale(c64::new(params.interaction / n, 0.0)) * jz2)?;
    let static_part = hopping.add(&interaction)?;
    let evolution = hermitian_expm(&static_part, params.period)?;
    let kick: Vec<c64> = (0..spin.dim())
        .map(|k| cis(-params.period * params.kick * spin.m(k)))
        .collect();
    FloquetOperator::from_matrix(
        scale_rows(&kick, evolution.into_matrix()),
        Space::SpinJ { spin },
        Some(ModelParams::Dimer(*params)),
    )
}

/// `|↑…↑⟩`, the fully polarized eigenstate of the Ising part, optionally in the sector.
pub fn polarized_state(basis: &SpinBasis, sector: Option<&SectorBasis>) -> Result<StateVector> {
    let full = StateVector::basis(basis.dim(), basis.all_up())?;
    match sector {
        None => Ok(full),
        Some(sector) => StateVector::new(sector.restrict_vector(full.as_col())?),
    }
}

/// Highest-weight eigenstate of `J_x` (spin coherent state along +x).
pub fn dimer_initial_state(spin: Spin) -> Result<StateVector> {
    let am = angular_momentum_operators(spin);
    let (_, q) = linalg::hermitian_eigen(am.jx.matrix())?;
    let last = q.ncols() - 1;
    let mut col = q.col(last).to_owned();
    // fix the gauge: largest component real positive
    let (mut best, mut phase) = (0.0, c64::new(1.0, 0.0));
    for i in 0..col.nrows() {
        if col[i].norm() > best + 1e-12 {
            best = col[i].norm();
            phase = col[i].conj() / col[i].norm();
        }
    }
    for i in 0..col.nrows() {
        col[i] *= phase;
    }
    StateVector::normalized(col)
}

/// Iterator over `ψ_0, Uψ_0, U²ψ_0, …` (unbounded).
pub struct Evolution<'a> {
    u: &'a FloquetOperator,
    current: Option<Col<c64>>,
}

impl Iterator for Evolution<'_> {
    type Item = Col<c64>;

    fn next(&mut self) -> Option<Col<c64>> {
        let current = self.current.take()?;
        self.current = Some(self.u.apply(&current));
        Some(current)
    }
}

pub fn evolution<'a>(u: &'a FloquetOperator, psi0: &StateVector) -> Result<Evolution<'a>> {
    if psi0.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi0.dim(),
        });
    }
    Ok(Evolution {
        u,
        current: Some(psi0.as_col().clone()),
    })
}

/// `[ψ_0, Uψ_0, …, U^steps ψ_0]`.
pub fn evolve(u: &FloquetOperator, psi0: &StateVector, steps: usize) -> Result<Vec<StateVector>> {
    Ok(evolution(u, psi0)?
        .take(steps + 1)
        .map(StateVector::from_col_unchecked)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity_deviation, max_abs_diff, unitarity_deviation, I, ZERO};
    use crate::statespace::{parity_sector, pauli_site_operator, reflection_operator, Axis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_3;

    fn basis(n: usize) -> SpinBasis {
        SpinBasis::new(n).unwrap()
    }

    #[test]
    fn zero_field_kick_is_identity() {
        let k = kick_unitary(&basis(4), 0.0, 0.7, 1.0);
        assert!(identity_deviation(k.matrix()) < 1e-15);
    }

    #[test]
    fn untilted_kick_is_diagonal_phases() {
        let b = basis(3);
        let k = kick_unitary(&b, 0.8, 0.0, 1.3);
        for s in 0..8 {
            for t in 0..8 {
                if s != t {
                    assert!(k.matrix()[(s, t)].norm() < 1e-15);
                }
            }
            let m: i32 = (1..=3).map(|site| b.z_value(s, site)).sum();
            let expected = cis(-1.3 * 0.8 * m as f64);
            assert!((k.matrix()[(s, s)] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn quarter_turn_about_x_is_minus_i_sigma_x() {
        let k = kick_unitary(&basis(1), FRAC_PI_2, FRAC_PI_2, 1.0);
        let expected = Mat::from_fn(2, 2, |i, j| if i != j { -I } else { ZERO });
        assert!(max_abs_diff(k.matrix(), expected.as_ref()) < 1e-15);
    }

    #[test]
    fn site_wise_kick_matches_expm_of_field_hamiltonian() {
        let b = basis(5);
        for &(field, tilt, period) in &[(1.0, FRAC_PI_3, 1.0), (0.37, 0.2, 2.5), (2.0, FRAC_PI_2, 0.1)] {
            let direct = kick_unitary(&b, field, tilt, period);
            let via_eig = hermitian_expm(&field_hamiltonian(&b, field, tilt), period).unwrap();
            assert!(max_abs_diff(direct.matrix(), via_eig.matrix()) < 1e-10);
        }
    }

    #[test]
    fn ising_diagonal_examples() {
        let id = ising_diagonal_unitary(&basis(3), 0.0, 0.0, 1.0);
        assert!(identity_deviation(id.matrix()) < 1e-15);

        let u = ising_diagonal_unitary(&basis(2), FRAC_PI_4, 0.0, 1.0);
        // 00 and 11 aligned, 01 and 10 anti-aligned
        for (s, sign) in [(0, -1.0), (3, -1.0), (1, 1.0), (2, 1.0)] {
            assert!((u.matrix()[(s, s)] - cis(sign * FRAC_PI_4)).norm() < 1e-15);
        }

        let g = 0.37;
        let t = 1.7;
        let u = ising_diagonal_unitary(&basis(3), 0.0, g, t);
        assert!((u.matrix()[(0, 0)] - cis(-3.0 * g * t)).norm() < 1e-14);
    }

    #[test]
    fn nonlocal_energies_match_pair_enumeration() {
        let b = basis(5);
        let e = ising_energies(&b, 0.0, 1.0);
        for s in 0..b.dim() {
            let mut pairs = 0.0;
            for i in 1..=5 {
                for j in i + 1..=5 {
                    pairs += (b.z_value(s, i) * b.z_value(s, j)) as f64;
                }
            }
            assert!((e[s] - pairs).abs() < 1e-12);
        }
    }

    #[test]
    fn kicked_ising_is_unitary_and_reflection_symmetric() {
        let b = basis(8);
        let params = DriveParams::new(1.0, 1.0, FRAC_PI_3);
        let u = build_kicked_ising(&b, &params, None).unwrap();
        assert!(unitarity_deviation(u.matrix()) < 1e-10);
        let r = reflection_operator(&b);
        assert!(linalg::commutator_deviation(u.matrix(), r.matrix()) < 1e-10);
        let sector = parity_sector(&b);
        let us = build_kicked_ising(&b, &params, Some(&sector)).unwrap();
        assert_eq!(us.dim(), sector.dim());
        assert!(unitarity_deviation(us.matrix()) < 1e-10);
        assert_eq!(us.space(), Space::ParitySector { num_sites: 8 });
    }

    #[test]
    fn short_period_approaches_identity() {
        let params = DriveParams::new(1.0, 1.0, 0.9).with_period(1e-6);
        let u = build_kicked_ising(&basis(6), &params, None).unwrap();
        assert!(identity_deviation(u.matrix()) < 1e-4);
    }

    #[test]
    fn untilted_map_keeps_polarized_state() {
        let b = basis(5);
        let u = build_kicked_ising(&b, &DriveParams::new(1.0, 0.6, 0.0), None).unwrap();
        let psi = polarized_state(&b, None).unwrap();
        let out = u.apply(psi.as_col());
        assert!((out[0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nonlocal_coupling_only_changes_the_diagonal_factor() {
        let b = basis(4);
        let local = build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, 1.0), None).unwrap();
        let g = 0.3;
        let nonlocal = build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, 1.0).with_nonlocal(g), None).unwrap();
        let extra = ising_diagonal_unitary(&b, 0.0, g, 1.0);
        let composed = extra.matrix() * local.matrix();
        assert!(max_abs_diff(composed.as_ref(), nonlocal.matrix()) < 1e-13);
    }

    #[test]
    fn invalid_drive_parameters() {
        let b = basis(3);
        assert!(build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, 2.0), None).is_err());
        assert!(build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, 1.0).with_period(0.0), None).is_err());
        let wrong = parity_sector(&basis(4));
        assert!(build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, 1.0), Some(&wrong)).is_err());
    }

    #[test]
    fn self_dual_is_unitary_and_periodic() {
        for n in 2..=8 {
            let u = build_self_dual(n).unwrap();
            assert!(unitarity_deviation(u.matrix()) < 1e-10);
            let mut power = u.matrix().to_owned();
            let mut period = None;
            for p in 1..=64 {
                let phase = power[(0, 0)];
                let scaled = faer::Scale(phase.conj()) * &power;
                if phase.norm() > 0.5 && identity_deviation(scaled.as_ref()) < 1e-8 {
                    period = Some(p);
                    break;
                }
                power = u.matrix() * &power;
            }
            assert!(period.is_some(), "no recurrence found for N = {n}");
        }
        assert!(build_self_dual(1).is_err());
    }

    #[test]
    fn hermitian_expm_examples() {
        let h = pauli_site_operator(&basis(1), 1, Axis::X).unwrap();
        let id = hermitian_expm(&h, 0.0).unwrap();
        assert!(identity_deviation(id.matrix()) < 1e-15);
        let theta = 0.731;
        let u = hermitian_expm(&h, theta).unwrap();
        let expected = Mat::from_fn(2, 2, |i, j| {
            if i == j { c64::new(theta.cos(), 0.0) } else { c64::new(0.0, -theta.sin()) }
        });
        assert!(max_abs_diff(u.matrix(), expected.as_ref()) < 1e-14);
        assert!(matches!(
            hermitian_expm(&Operator::general(Mat::from_fn(2, 2, |i, j| c64::new((i + 2 * j) as f64, 0.0))), 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn hermitian_expm_forward_backward_is_identity() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 64;
        let a = Mat::from_fn(n, n, |_, _| c64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let h = Operator::hermitian(&a + a.adjoint()).unwrap();
        let fwd = hermitian_expm(&h, 1.0).unwrap();
        let back = hermitian_expm(&h, -1.0).unwrap();
        let prod = fwd.matrix() * back.matrix();
        assert!(identity_deviation(prod.as_ref()) < 1e-10);
        assert!(unitarity_deviation(fwd.matrix()) < 1e-10);
    }

    #[test]
    fn dimer_without_kick_or_interaction_is_hopping_rotation() {
        let spin = Spin::from_twice(6);
        let params = DimerParams { spin, interaction: 0.0, kick: 0.0, period: 1.0 };
        let u = build_dimer_floquet(&params).unwrap();
        let am = angular_momentum_operators(spin);
        let expected = hermitian_expm(&am.jx, 2.0).unwrap();
        assert!(max_abs_diff(u.matrix(), expected.matrix()) < 1e-12);
    }

    #[test]
    fn dimer_is_unitary_at_desk_scale() {
        let params = DimerParams { spin: Spin::from_twice(200), interaction: 3.0, kick: 3.0, period: 1.0 };
        let u = build_dimer_floquet(&params).unwrap();
        assert_eq!(u.dim(), 201);
        assert!(unitarity_deviation(u.matrix()) < 1e-10);
    }

    #[test]
    fn dimer_conserves_total_spin() {
        let spin = Spin::from_twice(20);
        let j = spin.value();
        let am = angular_momentum_operators(spin);
        let casimir = am.jx.matrix() * am.jx.matrix()
            + am.jy.matrix() * am.jy.matrix()
            + am.jz.matrix() * am.jz.matrix();
        let params = DimerParams { spin, interaction: 0.0, kick: 1.1, period: 1.0 };
        let u = build_dimer_floquet(&params).unwrap();
        let psi0 = dimer_initial_state(spin).unwrap();
        for psi in evolve(&u, &psi0, 30).unwrap() {
            let v = &casimir * psi.as_col();
            let expectation: c64 = psi.as_col().adjoint() * &v;
            assert!((expectation.re - j * (j + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn dimer_initial_state_is_top_jx_eigenvector() {
        let spin = Spin::from_twice(9);
        let psi = dimer_initial_state(spin).unwrap();
        let am = angular_momentum_operators(spin);
        let v = am.jx.matrix() * psi.as_col();
        for i in 0..spin.dim() {
            assert!((v[i] - psi.as_col()[i] * spin.value()).norm() < 1e-10);
        }
    }

    #[test]
    fn evolve_examples() {
        let b = basis(3);
        let psi0 = polarized_state(&b, None).unwrap();
        let id = FloquetOperator::from_matrix(Mat::identity(8, 8), Space::Custom { dim: 8 }, None).unwrap();
        assert_eq!(evolve(&id, &psi0, 0).unwrap(), vec![psi0.clone()]);
        let seq = evolve(&id, &psi0, 5).unwrap();
        assert!(seq.iter().all(|s| *s == psi0));
        let wrong = StateVector::basis(4, 0).unwrap();
        assert!(evolve(&id, &wrong, 3).is_err());
    }

    #[test]
    fn long_evolution_keeps_norm() {
        let b = basis(10);
        let u = build_kicked_ising(&b, &DriveParams::new(1.0, 1.0, FRAC_PI_3), None).unwrap();
        let psi0 = polarized_state(&b, None).unwrap();
        let last = evolution(&u, &psi0).unwrap().nth(10_000).unwrap();
        assert!((last.norm_l2() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn non_unitary_matrix_is_rejected() {
        let m = Mat::from_fn(2, 2, |i, j| if i == j { c64::new(2.0, 0.0) } else { ZERO });
        assert!(matches!(
            FloquetOperator::from_matrix(m, Space::Custom { dim: 2 }, None),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn bch_error_is_second_order() {
        let b = basis(4);
        let h0 = ising_hamiltonian(&b, 1.0, 0.0);
        let v = field_hamiltonian(&b, 1.0, FRAC_PI_3);
        let sum = h0.add(&v).unwrap();
        let err = |t: f64| {
            let split = hermitian_expm(&h0, t).unwrap().matrix() * hermitian_expm(&v, t).unwrap().matrix();
            let joint = hermitian_expm(&sum, t).unwrap();
            max_abs_diff(split.as_ref(), joint.matrix())
        };
        for &t in &[1e-2, 5e-3] {
            let ratio = err(t) / err(t / 2.0);
            assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio} at T = {t}");
        }
    }
}
