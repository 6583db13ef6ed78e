use alloc::boxed::Box;

use thiserror::Error;

use crate::solver::CapacityResult;

/// Errors produced by the coherence toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, {cols} entries in row {row}")]
    NotSquare {
        rows: usize,
        cols: usize,
        row: usize,
    },

    #[error("matrix has {len} entries, expected {dim}x{dim}")]
    BadLength { dim: usize, len: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("trace is not 1: trace = {trace}, |trace - 1| = {deviation:e}")]
    NotUnitTrace { trace: f64, deviation: f64 },

    #[error("not positive semidefinite: {violation:e} ({what})")]
    NotPsd { what: &'static str, violation: f64 },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("state vector is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbability(&'static str),

    #[error("gamma must lie in (0, 1), got {0}")]
    InvalidGamma(f64),

    #[error("dimension {0} is not supported here")]
    InvalidDimension(usize),

    #[error("commutator i[rho, log2 Delta(rho)] vanishes (norm {0:e}); no Hamiltonian direction generates coherence")]
    ZeroCommutator(f64),

    #[error("grid resolution {0} exceeds the limit of 400")]
    ResolutionTooLarge(usize),

    #[error("state is rank deficient: smallest eigenvalue {0:e}")]
    SingularState(f64),

    #[error("invalid finite-difference step {0}; expected 0 < h <= 0.1")]
    InvalidStep(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(&'static str),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),

    /// No restart reached the gradient tolerance. The best value found is
    /// still carried along.
    #[error("no restart met the gradient tolerance (best value {:.17e})", .0.value)]
    NoConvergence(Box<CapacityResult>),
}

pub type Result<T> = core::result::Result<T, Error>;
