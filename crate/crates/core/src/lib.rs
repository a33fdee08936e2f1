//! Floquet quantum maps, Krylov bases and spread complexity.
//!
//! The crate builds one-period propagators for periodically kicked spin
//! chains and a kicked Bose-Hubbard dimer, constructs Krylov bases with
//! Lanczos (Hermitian generators) or Arnoldi (unitary maps) iteration, and
//! evaluates the diagnostics used to tell regular from chaotic dynamics:
//! spread complexity and entropy, Arnoldi-coefficient dispersion, quasi-energy
//! level statistics and magnetization.
//!
//! Everything is dense and deterministic. Matrices are [`faer::Mat`] over
//! [`c64`]; sizes up to a few thousand are expected.

pub mod error;
pub mod floquet;
pub mod krylov;
pub mod linalg;
pub mod observables;
pub mod spectral;
pub mod state;
pub mod statespace;

pub use error::{Error, Result};
pub use faer::c64;
pub use floquet::{DimerParams, DriveParams, FloquetOperator, ModelParams, Space};
pub use krylov::{AmplitudeTrajectory, ArnoldiData, LanczosData};
pub use spectral::SpectralStats;

pub use state::StateVector;
pub use statespace::{Axis, Operator, SectorBasis, Spin, SpinBasis};
