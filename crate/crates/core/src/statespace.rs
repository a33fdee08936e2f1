//! Spin-chain and spin-j Hilbert spaces, many-body operators and the
//! reflection-parity sector.
//!
//! Basis states of an `N`-site chain are labelled by `N`-bit integers. Site 1
//! is the most significant bit and a clear bit means spin up, so the matrix of
//! a single-site operator is the ordinary Kronecker product
//! `I ⊗ … ⊗ σ ⊗ … ⊗ I` with `σ^z = diag(1, -1)` in every factor.

use faer::{c64, Mat, MatRef};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, I, ONE};

/// Relative tolerance on `|M - M^dagger|` for operators flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|[M, R]|` before restricting to the parity sector.
pub const COMMUTATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Computational basis of `N` spin-1/2 sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinBasis {
    num_sites: usize,
}

impl SpinBasis {
    /// Largest supported chain; `2^N` dense matrices beyond this do not fit in memory.
    pub const MAX_SITES: usize = 14;

    pub fn new(num_sites: usize) -> Result<Self> {
        if num_sites == 0 || num_sites > Self::MAX_SITES {
            return Err(Error::InvalidArgument(format!(
                "number of sites must be in 1..={}, got {num_sites}",
                Self::MAX_SITES
            )));
        }
        Ok(Self { num_sites })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        1 << self.num_sites
    }

    /// Bit position holding `site` (1-based).
    #[inline]
    pub fn bit_of(&self, site: usize) -> usize {
        self.num_sites - site
    }

    /// `sigma^z` eigenvalue (`+1` up, `-1` down) of `site` in basis state `state`.
    #[inline]
    pub fn z_value(&self, state: usize, site: usize) -> i32 {
        if state >> self.bit_of(site) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Site reflection `i -> N + 1 - i`, i.e. bit reversal over `N` bits.
    #[inline]
    pub fn reflect(&self, state: usize) -> usize {
        state.reverse_bits() >> (usize::BITS as usize - self.num_sites)
    }

    /// Index of the fully polarized state `|↑…↑⟩`.
    pub fn all_up(&self) -> usize {
        0
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.num_sites {
            return Err(Error::InvalidArgument(format!(
                "site {site} outside 1..={}",
                self.num_sites
            )));
        }
        Ok(())
    }
}

/// Dense operator with an optional Hermiticity guarantee.
#[derive(Debug, Clone)]
pub struct Operator {
    matrix: Mat<c64>,
    hermitian: bool,
}

impl Operator {
    /// Wraps `matrix`; when `hermitian` is set the claim is verified.
    pub fn new(matrix: Mat<c64>, hermitian: bool) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if hermitian {
            let deviation = linalg::hermiticity_deviation(matrix.as_ref());
            let scale = matrix.norm_max().max(1.0);
            if deviation > HERMITIAN_TOL * scale {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(Self { matrix, hermitian })
    }

    pub fn hermitian(matrix: Mat<c64>) -> Result<Self> {
        Self::new(matrix, true)
    }

    pub fn general(matrix: Mat<c64>) -> Self {
        Self {
            matrix,
            hermitian: false,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Mat::identity(dim, dim),
            hermitian: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, c64> {
        self.matrix.as_ref()
    }

    pub fn into_matrix(self) -> Mat<c64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sum of two operators; Hermitian if both are.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Operator {
            matrix: &self.matrix + &other.matrix,
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Real multiple of the operator.
    pub fn scaled(&self, factor: f64) -> Operator {
        Operator {
            matrix: faer::Scale(c64::new(factor, 0.0)) * &self.matrix,
            hermitian: self.hermitian,
        }
    }
}

/// `σ^axis` acting on `site` (1-based), identity elsewhere.
pub fn pauli_site_operator(basis: &SpinBasis, site: usize, axis: Axis) -> Result<Operator> {
    basis.check_site(site)?;
    let dim = basis.dim();
    let mut m = Mat::<c64>::zeros(dim, dim);
    add_single_site(&mut m, basis, site, axis);
    Ok(Operator {
        matrix: m,
        hermitian: true,
    })
}

/// `Σ_i σ_i^axis`.
pub fn total_spin_operator(basis: &SpinBasis, axis: Axis) -> Operator {
    let dim = basis.dim();
    let mut m = Mat::<c64>::zeros(dim, dim);
    for site in 1..=basis.num_sites() {
        add_single_site(&mut m, basis, site, axis);
    }
    Operator {
        matrix: m,
        hermitian: true,
    }
}

fn add_single_site(m: &mut Mat<c64>, basis: &SpinBasis, site: usize, axis: Axis) {
    let mask = 1usize << basis.bit_of(site);
    for s in 0..basis.dim() {
        let up = s & mask == 0;
        match axis {
            Axis::Z => m[(s, s)] += if up { ONE } else { -ONE },
            Axis::X => m[(s ^ mask, s)] += ONE,
            // σ^y |↑⟩ = i|↓⟩, σ^y |↓⟩ = -i|↑⟩
            Axis::Y => m[(s ^ mask, s)] += if up { I } else { -I },
        }
    }
}

/// Permutation matrix of the site reflection.
pub fn reflection_operator(basis: &SpinBasis) -> Operator {
    let dim = basis.dim();
    let mut m = Mat::<c64>::zeros(dim, dim);
    for s in 0..dim {
        m[(basis.reflect(s), s)] = ONE;
    }
    Operator {
        matrix: m,
        hermitian: true,
    }
}

/// One reflection orbit: a single self-reflective state or a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orbit {
    Fixed(usize),
    Pair(usize, usize),
}

impl Orbit {
    fn weight(&self) -> f64 {
        match self {
            Orbit::Fixed(_) => 1.0,
            Orbit::Pair(..) => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    fn members(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Orbit::Fixed(s) => (s, None),
            Orbit::Pair(s, t) => (s, Some(t)),
        };
        std::iter::once(a).chain(b)
    }
}

/// Positive-parity sector of a spin chain under site reflection.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    parent: SpinBasis,
    orbits: Vec<Orbit>,
}

impl SectorBasis {
    pub fn parent(&self) -> &SpinBasis {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        self.orbits.len()
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    /// Dense isometry `V` (parent dim × sector dim) whose columns span the sector.
    pub fn isometry(&self) -> Mat<c64> {
        let mut v = Mat::<c64>::zeros(self.parent.dim(), self.dim());
        for (c, orbit) in self.orbits.iter().enumerate() {
            let w = c64::new(orbit.weight(), 0.0);
            for s in orbit.members() {
                v[(s, c)] = w;
            }
        }
        v
    }

    /// `V^dagger ψ` for a full-space vector.
    pub fn restrict_vector(&self, full: &faer::Col<c64>) -> Result<faer::Col<c64>> {
        if full.nrows() != self.parent.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.parent.dim(),
                found: full.nrows(),
            });
        }
        Ok(faer::Col::from_fn(self.dim(), |c| {
            let orbit = self.orbits[c];
            orbit.members().map(|s| full[s]).sum::<c64>() * orbit.weight()
        }))
    }

    /// `V φ` for a sector vector.
    pub fn embed_vector(&self, sector: &faer::Col<c64>) -> Result<faer::Col<c64>> {
        if sector.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: sector.nrows(),
            });
        }
        let mut full = faer::Col::<c64>::zeros(self.parent.dim());
        for (c, orbit) in self.orbits.iter().enumerate() {
            for s in orbit.members() {
                full[s] = sector[c] * orbit.weight();
            }
        }
        Ok(full)
    }
}

/// Expected sector dimension `(2^N + 2^⌈N/2⌉) / 2`.
pub fn parity_sector_dim(num_sites: usize) -> usize {
    ((1usize << num_sites) + (1usize << num_sites.div_ceil(2))) / 2
}

/// Enumerates reflection orbits; columns are ordered by the smaller member.
pub fn parity_sector(basis: &SpinBasis) -> SectorBasis {
    let orbits = (0..basis.dim())
        .filter_map(|s| {
            let r = basis.reflect(s);
            match r.cmp(&s) {
                std::cmp::Ordering::Equal => Some(Orbit::Fixed(s)),
                std::cmp::Ordering::Greater => Some(Orbit::Pair(s, r)),
                std::cmp::Ordering::Less => None,
            }
        })
        .collect();
    SectorBasis {
        parent: *basis,
        orbits,
    }
}

/// Whether [`project_operator`] verifies reflection symmetry first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetryCheck {
    #[default]
    Enforce,
    Waive,
}

/// Largest element of `|MR - RM|` for the reflection permutation `R`.
pub fn reflection_commutator(m: MatRef<'_, c64>, basis: &SpinBasis) -> f64 {
    let dim = basis.dim();
    let mut max = 0.0f64;
    for j in 0..dim {
        let rj = basis.reflect(j);
        for i in 0..dim {
            max = max.max((m[(i, rj)] - m[(basis.reflect(i), j)]).norm());
        }
    }
    max
}

/// Restricts `op` to the sector: `V^dagger M V`.
pub fn project_operator(op: &Operator, sector: &SectorBasis, check: SymmetryCheck) -> Result<Operator> {
    let parent = sector.parent();
    if op.dim() != parent.dim() {
        return Err(Error::DimensionMismatch {
            expected: parent.dim(),
            found: op.dim(),
        });
    }
    if check == SymmetryCheck::Enforce {
        let commutator = reflection_commutator(op.matrix(), parent);
        if commutator > COMMUTATION_TOL {
            return Err(Error::SymmetryBroken { commutator });
        }
    }
    let m = op.matrix();
    let orbits = sector.orbits();
    let sd = orbits.len();
    // M V, one combination of parent columns per orbit
    let mut mv = Mat::<c64>::zeros(parent.dim(), sd);
    for (c, orbit) in orbits.iter().enumerate() {
        let w = orbit.weight();
        for s in orbit.members() {
            for i in 0..parent.dim() {
                mv[(i, c)] += m[(i, s)] * w;
            }
        }
    }
    let out = Mat::from_fn(sd, sd, |r, c| {
        let orbit = orbits[r];
        orbit.members().map(|s| mv[(s, c)]).sum::<c64>() * orbit.weight()
    });
    Ok(Operator {
        matrix: out,
        hermitian: op.hermitian,
    })
}

/// Spin quantum number `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    /// Accepts any non-negative integer or half-integer.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !(twice.is_finite() && twice >= 0.0 && (twice - twice.round()).abs() < 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "spin must be a non-negative half-integer, got {j}"
            )));
        }
        Ok(Self {
            twice: twice.round() as u32,
        })
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }

    /// Magnetic quantum number of basis index `k`: `m = j - k`.
    pub fn m(&self, k: usize) -> f64 {
        self.value() - k as f64
    }
}

/// Spin-j matrices in the `J_z` eigenbasis, `J_z = diag(j, j-1, …, -j)`.
#[derive(Debug, Clone)]
pub struct AngularMomentum {
    pub jx: Operator,
    pub jy: Operator,
    pub jz: Operator,
}

pub fn angular_momentum_operators(spin: Spin) -> AngularMomentum {
    let dim = spin.dim();
    let j = spin.value();
    let mut jx = Mat::<c64>::zeros(dim, dim);
    let mut jy = Mat::<c64>::zeros(dim, dim);
    let mut jz = Mat::<c64>::zeros(dim, dim);
    for k in 0..dim {
        let m = spin.m(k);
        jz[(k, k)] = c64::new(m, 0.0);
        if k > 0 {
            // ⟨m+1| J+ |m⟩
            let raise = (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
            jx[(k - 1, k)] = c64::new(raise / 2.0, 0.0);
            jx[(k, k - 1)] = c64::new(raise / 2.0, 0.0);
            jy[(k - 1, k)] = c64::new(0.0, -raise / 2.0);
            jy[(k, k - 1)] = c64::new(0.0, raise / 2.0);
        }
    }
    AngularMomentum {
        jx: Operator { matrix: jx, hermitian: true },
        jy: Operator { matrix: jy, hermitian: true },
        jz: Operator { matrix: jz, hermitian: true },
    }
}
