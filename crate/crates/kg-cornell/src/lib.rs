//! Bound states and thermodynamics of the D-dimensional Klein-Gordon equation
//! with unequal scalar and time-like vector Cornell couplings,
//!
//! ```text
//! V(r) = -a_v/r + b_v r        (time-like vector)
//! S(r) = -a_s/r + b_s r        (scalar)
//! ```
//!
//! in natural units `hbar = c = 1`. The crate has four parts:
//!
//! * [`spectral`] — the closed-form level formula: the near-origin exponent
//!   `k` (three published conventions, see [`spectral::KVariant`]), the energy
//!   quadratic and its cancellation-safe roots, the exact linear-in-`n`
//!   recast `E_n/M = b_v/b_s + sqrt(A + B n)`, and reference-grid generation.
//! * [`thermo`] — the partition function over the positive-energy branch
//!   (truncated direct sum with an analytic tail bound, and an
//!   Euler-Maclaurin closed form) plus Helmholtz free energy, mean energy,
//!   entropy, and specific heat on a dimensionless temperature grid.
//! * [`radial`] — the closed-form radial wave function, its approximate
//!   closed-form normalization constant, and an exact normalization by
//!   adaptive quadrature.
//! * [`ode`] — an independent Numerov shooting eigensolver for the reduced
//!   radial equation (nonlinear in E), used to cross-examine the closed form
//!   and validated against exactly solvable limits.
//!
//! Everything is a pure function of its inputs; all types are plain data and
//! safe to share across threads.

pub mod acceptance;
pub mod ode;
pub mod quad;
pub mod radial;
pub mod special;
pub mod spectral;
pub mod thermo;

pub use ode::{compare_with_closed_form, find_level, shoot_mismatch, OdeEigenvalue, OdeProblem};
pub use radial::{
    build_wavefunction, norm_paper, norm_quadrature, sample_wavefunction, Branch,
    RadialWavefunction, WavefunctionSample,
};
pub use spectral::{
    energy_pair, k_exponent, linear_form, spectrum_table, CellStatus, CouplingParams, EnergyPair,
    KVariant, LinearSpectrum, QuantumState, TableRow,
};
pub use thermo::{partition_direct, partition_em, thermo_curve, thermo_point, Method, ThermoPoint};
