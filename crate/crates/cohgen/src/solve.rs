//! Restarts of the numeric capacity search, run on the rayon thread pool.

use cohgen_core::solver::{ascend_restart, reduce_restarts};
use cohgen_core::{CapacityResult, HermitianMatrix, Result, SolverConfig};
use rayon::prelude::*;

/// Same result as [`cohgen_core::capacity_numeric`], bit for bit: every restart owns its
/// seeded stream and the reduction is ordered by restart index.
pub fn capacity_parallel(h: &HermitianMatrix, cfg: &SolverConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    if h.dim() < 2 {
        return Err(cohgen_core::Error::InvalidDimension(h.dim()));
    }
    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| ascend_restart(h, cfg, i))
        .collect();
    reduce_restarts(h, cfg, outcomes)
}
