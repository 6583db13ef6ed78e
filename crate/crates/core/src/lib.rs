//! Coherence generation with Hamiltonians.
//!
//! This crate computes how fast a Hamiltonian `H` can create coherence, measured by the
//! relative entropy of coherence `C_r(rho) = S(Delta[rho]) - S(rho)` (base-2 logarithms
//! throughout, so all quantities are in bits). The instantaneous rate at `t = 0` under
//! `U_t = exp(-i t H)` is
//!
//! ```text
//! dC_r/dt = i Tr(H [rho, log2 Delta(rho)]) = Tr(H M),   M = i[rho, log2 Delta(rho)]
//! ```
//!
//! and the coherence generating capacity `C_gen(H)` is its maximum over states.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex Hermitian algebra, Jacobi eigensolver, `exp(-iHt)`,
//!   Hilbert-Schmidt norm and inner product, validated state types.
//! - [`coherence`]: dephasing, entropies, `C_r`, the commutator `M`, the analytic
//!   derivative, and the surprisal variance in both its variance and pairwise forms.
//! - [`solver`]: capacities (closed-form qubit path and projected gradient ascent on
//!   the unit sphere), the optimal `(gamma, uniform tail)` family, optimal states and
//!   Hamiltonians, Hölder-saturating Hamiltonians and the simplex grid oracle.
//! - [`dynamics`]: unitary evolution, coherence trajectories, finite-difference oracles.
//! - [`sampling`]: seeded random instances (states, Hamiltonians, unitaries).
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` deliberately treats NaN as failing the test
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod coherence;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod sampling;
pub mod search;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use coherence::{
    coherence_derivative, commutator_m, dephase, log2_dephased, rel_entropy_coherence,
    surprisal_variance, surprisal_variance_pairform, von_neumann_entropy, DerivativeReport,
    ProbabilityVector,
};
pub use dynamics::{
    dephased_rate_derivative, entropy_derivative_check, evolve, fd_derivative,
    fd_derivative_richardson, trajectory, EntropyRateCheck, Trajectory,
};
pub use linalg::{
    eig_hermitian, hs_inner, hs_norm, unitary_exp, validate_density, ComplexMatrix, DensityMatrix,
    Eigen, HermitianMatrix, PureState,
};
pub use solver::{
    capacity_numeric, capacity_qubit, holder_hamiltonian, max_surprisal_variance,
    optimal_hamiltonian, optimal_state, simplex_grid_oracle, theorem1_check, CapacityResult,
    GammaResult, GridOracleResult, Method, SolverConfig, TheoremCheck,
};

/// Tolerance for Hermiticity, unit trace, PSD and normalization checks.
pub const VALIDATION_TOL: f64 = 1e-12;

/// Diagonal entries below this are treated as exactly zero inside logarithms.
pub const ZERO_DIAGONAL: f64 = 1e-14;
