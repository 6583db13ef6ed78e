//! Self-verification suite: identities and bounds checked on seeded random instances.

use cohgen_core::linalg::ComplexMatrix;
use cohgen_core::{
    capacity_qubit, coherence_derivative, commutator_m, dephased_rate_derivative,
    entropy_derivative_check, fd_derivative, holder_hamiltonian, hs_norm, log2_dephased,
    max_surprisal_variance, optimal_state, sampling, simplex_grid_oracle, surprisal_variance,
    surprisal_variance_pairform, trajectory, DensityMatrix, HermitianMatrix, ProbabilityVector,
    SolverConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::solve::capacity_parallel;

/// Smallest population of the random full-support states.
const MIN_POPULATION: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    fn as_str(self) -> &'static str {
        match self {
            Level::Fast => "fast",
            Level::Full => "full",
        }
    }

    fn samples(self) -> usize {
        match self {
            Level::Fast => 100,
            Level::Full => 1000,
        }
    }
}

/// Logarithm used by the independent rate evaluation in the capacity-bound checks.
/// [`LogBase::Natural`] is a deliberate defect for exercising the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Two,
    Natural,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::Natural => x.ln(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub residual: f64,
    pub samples: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

impl Check {
    fn new(name: impl Into<String>, tolerance: f64, residual: f64, samples: usize) -> Self {
        Check {
            name: name.into(),
            tolerance,
            residual,
            samples,
            passed: residual <= tolerance,
            observed: None,
            expected: None,
        }
    }

    fn failed(name: impl Into<String>, tolerance: f64, samples: usize) -> Self {
        let mut c = Check::new(name, tolerance, f64::INFINITY, samples);
        c.passed = false;
        c
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub level: &'static str,
    pub seed: u64,
    pub log_base: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// `Tr(H M)` evaluated entrywise with the given logarithm.
fn rate_with_log(h: &HermitianMatrix, rho: &DensityMatrix, base: LogBase) -> f64 {
    let d = h.dim();
    let logs: Vec<f64> = rho.populations().iter().map(|&p| base.log(p)).collect();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                // H_ji * i rho_ij (L_j - L_i)
                let m = rho.get(i, j) * cohgen_core::Complex64::new(0.0, logs[j] - logs[i]);
                acc += (h.get(j, i) * m).re;
            }
        }
    }
    acc
}

fn capacity_bound_equality(base: LogBase) -> Vec<Check> {
    (2..=6)
        .map(|d| {
            let name = format!("capacity_bound_attained_d{d}");
            let run = || -> cohgen_core::Result<Check> {
                let opt = max_surprisal_variance(d)?;
                let sigma = optimal_state(d, opt.gamma)?.density();
                let h = holder_hamiltonian(&sigma)?;
                let lhs = rate_with_log(&h, &sigma, base);
                let mut c = Check::new(name.clone(), 1e-8, (lhs - opt.capacity_bound).abs(), 1);
                c.observed = Some(lhs);
                c.expected = Some(opt.capacity_bound);
                Ok(c)
            };
            run().unwrap_or_else(|_| Check::failed(name, 1e-8, 1))
        })
        .collect()
}

fn max_over<F>(n: usize, mut f: F) -> cohgen_core::Result<f64>
where
    F: FnMut() -> cohgen_core::Result<f64>,
{
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..n {
        worst = worst.max(f()?);
    }
    Ok(worst)
}

fn sampled(name: &str, tolerance: f64, samples: usize, r: cohgen_core::Result<f64>) -> Check {
    match r {
        Ok(residual) => Check::new(name, tolerance, residual, samples),
        Err(_) => Check::failed(name, tolerance, samples),
    }
}

fn identity_checks(level: Level, seed: u64) -> Vec<Check> {
    let n = level.samples();
    let dims = 2..=6usize;
    let total = n * dims.clone().count();
    let mut checks = Vec::new();

    let mut rng = stream(seed, 1);
    let r = dims.clone().try_fold(0.0f64, |w, d| {
        let v = max_over(n, || {
            let a = sampling::random_hermitian(&mut rng, d);
            let b = sampling::random_full_support_density(&mut rng, d, MIN_POPULATION / d as f64);
            let log_b = log2_dephased(b.hermitian())?;
            let delta_a = ComplexMatrix::from_real_diagonal(&a.real_diagonal());
            let lhs = delta_a.matmul(log_b.matrix()).trace();
            let rhs = a.matrix().matmul(log_b.matrix()).trace();
            Ok((lhs - rhs).norm())
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("dephased_trace_identity", 1e-10, total, r));

    let mut rng = stream(seed, 2);
    let r = dims.clone().try_fold(0.0f64, |w, d| {
        let v = max_over(n, || {
            let rho = sampling::random_density(&mut rng, d);
            let variance = surprisal_variance(&ProbabilityVector::of_populations(&rho));
            Ok((variance - surprisal_variance_pairform(&rho)).abs())
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("variance_pairwise_forms", 1e-10, total, r));

    let mut rng = stream(seed, 3);
    let r = dims.clone().try_fold(0.0f64, |w, d| {
        let v = max_over(n, || {
            let rho = sampling::random_full_support_density(&mut rng, d, MIN_POPULATION / d as f64);
            let h = sampling::random_hermitian(&mut rng, d);
            let analytic = coherence_derivative(&h, &rho)?.analytic;
            Ok((dephased_rate_derivative(&rho, &h)? - analytic).abs())
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("intermediate_rate_form", 1e-10, total, r));

    let mut rng = stream(seed, 4);
    let r = dims.clone().try_fold(0.0f64, |w, d| {
        let v = max_over(n, || {
            let rho = sampling::random_full_support_density(&mut rng, d, MIN_POPULATION / d as f64);
            let h = holder_hamiltonian(&rho)?;
            let rate = coherence_derivative(&h, &rho)?.analytic;
            Ok((rate - hs_norm(commutator_m(&rho).matrix())).abs())
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("holder_saturation", 1e-9, total, r));

    let fd_dims = 2..=4usize;
    let fd_n = n.min(200);
    let mut rng = stream(seed, 5);
    let r = fd_dims.clone().try_fold(0.0f64, |w, d| {
        let v = max_over(fd_n, || {
            let rho = sampling::random_full_support_density(&mut rng, d, MIN_POPULATION);
            let h = sampling::random_unit_hamiltonian(&mut rng, d);
            let analytic = coherence_derivative(&h, &rho)?.analytic;
            Ok((fd_derivative(&rho, &h, 1e-4)? - analytic).abs())
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("finite_difference_rate", 1e-6, fd_n * 3, r));

    let mut rng = stream(seed, 6);
    let r = fd_dims.clone().try_fold(f64::NEG_INFINITY, |w, d| {
        let bound = max_surprisal_variance(d)?.capacity_bound;
        let v = max_over(n * 10, || {
            let h = sampling::random_unit_hamiltonian(&mut rng, d);
            let rho = sampling::random_pure_state(&mut rng, d).density();
            Ok(coherence_derivative(&h, &rho)?.analytic - bound)
        })?;
        Ok(w.max(v))
    });
    checks.push(sampled("capacity_upper_bound", 1e-9, n * 30, r));

    let traj_n = n / 10;
    let times: Vec<f64> = (0..100).map(|k| k as f64 * 0.1).collect();
    let mut rng = stream(seed, 7);
    let mut drift = Ok(0.0f64);
    let mut rate = Ok(0.0f64);
    for d in fd_dims {
        for _ in 0..traj_n {
            let rho = sampling::random_density(&mut rng, d);
            let h = sampling::random_hermitian(&mut rng, d);
            drift = drift.and_then(|w| {
                let t = trajectory(&rho, &h, &times)?;
                Ok(t.entropy
                    .iter()
                    .fold(w, |w, s| w.max((s - t.entropy[0]).abs())))
            });
            rate =
                rate.and_then(|w| Ok(w.max(entropy_derivative_check(&rho, &h, 1e-4)?.rhs.abs())));
        }
    }
    checks.push(sampled(
        "entropy_constant_along_trajectory",
        1e-9,
        traj_n * 3,
        drift,
    ));
    checks.push(sampled("entropy_rate_vanishes", 1e-10, traj_n * 3, rate));
    checks
}

fn cross_method_check(level: Level, seed: u64) -> Check {
    let n = level.samples() / 10;
    let cfg = SolverConfig {
        seed,
        ..SolverConfig::default()
    };
    let mut rng = stream(seed, 8);
    let r = max_over(n, || {
        let h = sampling::random_hermitian(&mut rng, 2);
        let exact = capacity_qubit(&h)?.value;
        Ok((capacity_parallel(&h, &cfg)?.value - exact).abs())
    });
    sampled("qubit_numeric_agreement", 1e-6, n, r)
}

fn simplex_checks() -> Vec<Check> {
    [(2usize, 400usize), (3, 150)]
        .iter()
        .map(|&(d, resolution)| {
            let name = format!("simplex_grid_d{d}");
            let run = || -> cohgen_core::Result<Check> {
                let opt = max_surprisal_variance(d)?;
                let grid = simplex_grid_oracle(d, resolution)?;
                let mut c = Check::new(
                    name.clone(),
                    1e-12,
                    (grid.f_best - opt.f_max).max(0.0),
                    grid.points,
                );
                c.observed = Some(grid.f_best);
                c.expected = Some(opt.f_max);
                Ok(c)
            };
            run().unwrap_or_else(|_| Check::failed(name, 1e-12, 0))
        })
        .collect()
}

pub fn run_suite(level: Level, seed: u64, base: LogBase) -> VerifyReport {
    let mut checks = capacity_bound_equality(base);
    checks.extend(identity_checks(level, seed));
    checks.push(cross_method_check(level, seed));
    if level == Level::Full {
        checks.extend(simplex_checks());
    }
    VerifyReport {
        level: level.as_str(),
        seed,
        log_base: match base {
            LogBase::Two => "2",
            LogBase::Natural => "e",
        },
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}
