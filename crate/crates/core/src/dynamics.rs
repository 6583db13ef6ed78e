//! Unitary evolution `rho_t = exp(-iHt) rho exp(iHt)` and finite-difference oracles for the
//! analytic rates.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coherence::{log2_populations, log2_state, rel_entropy_coherence, von_neumann_entropy};
use crate::linalg::{
    eig_hermitian, validate_density, ComplexMatrix, DensityMatrix, Eigen, HermitianMatrix,
};
use crate::{Error, Result};

/// States with an eigenvalue below this are rejected by [`entropy_derivative_check`].
pub const RANK_TOL: f64 = 1e-10;

/// Default central-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Sampled coherence trajectory.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// `C_r(rho_t)` in bits.
    pub coherence: Vec<f64>,
    /// `S(rho_t)` in bits; constant up to rounding.
    pub entropy: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(t, C_r)` of the largest coherence sample; earliest time wins ties.
    pub fn max_coherence(&self) -> (f64, f64) {
        let mut best = 0;
        for (k, &c) in self.coherence.iter().enumerate() {
            if c > self.coherence[best] {
                best = k;
            }
        }
        (self.times[best], self.coherence[best])
    }
}

/// `{lhs, rhs}` of `dS(rho_t)/dt = -Tr(rho_dot log2 rho)` at `t = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyRateCheck {
    /// Central difference of `S(rho_t)`.
    pub lhs: f64,
    /// `-Tr((-i[H, rho]) log2 rho)`.
    pub rhs: f64,
}

fn check_dims(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), h.dim()));
    }
    Ok(())
}

fn conjugate(eig: &Eigen, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    let u = eig.unitary(t);
    let out = u.matmul(rho.matrix()).matmul(&u.adjoint());
    validate_density(out)
}

/// `U rho U^dagger` with `U = exp(-iHt)`, revalidated as a density matrix.
pub fn evolve(rho: &DensityMatrix, h: &HermitianMatrix, t: f64) -> Result<DensityMatrix> {
    check_dims(rho, h)?;
    if !t.is_finite() {
        return Err(Error::InvalidGrid("time must be finite"));
    }
    conjugate(&eig_hermitian(h)?, rho, t)
}

/// Evolves `rho` over `times` and records coherence and entropy at each sample. `H` is
/// diagonalized once.
pub fn trajectory(rho: &DensityMatrix, h: &HermitianMatrix, times: &[f64]) -> Result<Trajectory> {
    check_dims(rho, h)?;
    if times.is_empty() {
        return Err(Error::InvalidGrid("empty time grid"));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("time must be finite"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("times must be strictly ascending"));
    }
    let eig = eig_hermitian(h)?;
    let mut out = Trajectory {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        coherence: Vec::with_capacity(times.len()),
        entropy: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let state = conjugate(&eig, rho, t)?;
        out.coherence.push(rel_entropy_coherence(&state)?);
        out.entropy.push(von_neumann_entropy(&state)?);
        out.states.push(state);
    }
    Ok(out)
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::InvalidStep(h));
    }
    Ok(())
}

/// Central difference `[C_r(rho_h) - C_r(rho_-h)] / 2h`.
pub fn fd_derivative(rho: &DensityMatrix, h: &HermitianMatrix, step: f64) -> Result<f64> {
    check_dims(rho, h)?;
    check_step(step)?;
    let eig = eig_hermitian(h)?;
    central(&eig, rho, step)
}

fn central(eig: &Eigen, rho: &DensityMatrix, step: f64) -> Result<f64> {
    let fwd = rel_entropy_coherence(&conjugate(eig, rho, step)?)?;
    let bwd = rel_entropy_coherence(&conjugate(eig, rho, -step)?)?;
    Ok((fwd - bwd) / (2.0 * step))
}

/// Richardson-extrapolated central difference, `(4 D(h/2) - D(h)) / 3`; fourth order in `h`.
pub fn fd_derivative_richardson(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    step: f64,
) -> Result<f64> {
    check_dims(rho, h)?;
    check_step(step)?;
    let eig = eig_hermitian(h)?;
    let coarse = central(&eig, rho, step)?;
    let fine = central(&eig, rho, 0.5 * step)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Compares the finite-difference entropy rate with `-Tr(rho_dot log2 rho)` at `t = 0`.
///
/// Both vanish for unitary dynamics; the check exists to exercise the identity on
/// full-rank states. Rank-deficient states are rejected rather than regularized.
pub fn entropy_derivative_check(
    rho: &DensityMatrix,
    h: &HermitianMatrix,
    step: f64,
) -> Result<EntropyRateCheck> {
    check_dims(rho, h)?;
    check_step(step)?;
    let log_rho = log2_state(rho, RANK_TOL)?;
    let eig = eig_hermitian(h)?;
    let fwd = von_neumann_entropy(&conjugate(&eig, rho, step)?)?;
    let bwd = von_neumann_entropy(&conjugate(&eig, rho, -step)?)?;
    let lhs = (fwd - bwd) / (2.0 * step);
    let rho_dot = von_neumann_rhs(h, rho);
    let rhs = -rho_dot.matmul(&log_rho).trace().re;
    Ok(EntropyRateCheck { lhs, rhs })
}

/// `rho_dot = -i [H, rho]`
pub fn von_neumann_rhs(h: &HermitianMatrix, rho: &DensityMatrix) -> ComplexMatrix {
    ComplexMatrix::commutator(h.matrix(), rho.matrix()).scale(Complex64::new(0.0, -1.0))
}

/// The rate in its intermediate form `-Tr(Delta(rho_dot) log2 Delta(rho))`.
pub fn dephased_rate_derivative(rho: &DensityMatrix, h: &HermitianMatrix) -> Result<f64> {
    check_dims(rho, h)?;
    let rho_dot = von_neumann_rhs(h, rho);
    let logs = log2_populations(&rho.populations());
    Ok(-(0..rho.dim())
        .map(|i| rho_dot.get(i, i).re * logs[i])
        .sum::<f64>())
}
