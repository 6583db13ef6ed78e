//! Coherence generating capacity `C_gen(H) = max_rho Tr(H M(rho))`.
//!
//! Two routes:
//!
//! - qubits: closed form. The rate reduces to `-2 |H_10| |rho_01| sin(alpha - beta) log2(rho_11/rho_00)`,
//!   maximized by `alpha = beta - pi/2`, `|rho_01| = sqrt(rho_00 rho_11)` and a 1-D search over
//!   `rho_00`;
//! - any dimension: projected gradient ascent over unit-norm factors `A` of `rho = A A^dagger`
//!   (a single column for pure states), with backtracking and seeded random restarts.
//!
//! Over all `H` with `||H||_2 <= 1` the optimum is `sqrt(2 f_max)` where `f_max` is the largest
//! surprisal variance; it is attained on the `(gamma, (1-gamma)/(d-1), ...)` family, which
//! [`max_surprisal_variance`] searches.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is linked
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::coherence::{
    coherence_derivative, commutator_m, derivative_raw, log2_populations, ProbabilityVector,
};
use crate::linalg::{hs_norm, ComplexMatrix, DensityMatrix, HermitianMatrix, PureState};
use crate::search::{bisect_root, golden_section_max};
use crate::{Error, Result, ZERO_DIAGONAL};

/// Lower bound on `|psi_i|^2` (row norms of the factor) during ascent.
pub const POPULATION_FLOOR: f64 = 1e-12;

const ARMIJO: f64 = 1e-4;
const GAMMA_EPS: f64 = 1e-12;
const BRACKET_TOL: f64 = 1e-10;
const MAX_GRID_RESOLUTION: usize = 400;

/// Settings for [`capacity_numeric`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub step_init: f64,
    pub seed: u64,
    /// Search over mixed states `rho = A A^dagger` with square `A` instead of pure states.
    pub mixed: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iters: 2000,
            grad_tol: 1e-9,
            step_init: 0.1,
            seed: 0,
            mixed: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if !(self.grad_tol > 0.0 && self.grad_tol.is_finite()) {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return Err(Error::InvalidConfig("step_init must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    QubitAnalytic,
    PureStateAscent,
    MixedStateAscent,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::QubitAnalytic => "qubit_analytic",
            Method::PureStateAscent => "pure_state_ascent",
            Method::MixedStateAscent => "mixed_state_ascent",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityResult {
    /// Best rate found, bits per unit time. Never negative.
    pub value: f64,
    pub argmax_state: DensityMatrix,
    pub method: Method,
    pub restarts_used: usize,
    pub converged: bool,
    /// Smallest population of `argmax_state`.
    pub min_diag: f64,
    /// Restart that produced `value` (0 for the analytic path).
    pub best_restart: usize,
    /// Projected gradient norm at the returned point (0 for the analytic path).
    pub grad_norm: f64,
}

/// Outcome of one ascent run; see [`ascend_restart`].
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub index: usize,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Row-major `dim x rank` factor with unit Frobenius norm.
    pub factor: Vec<Complex64>,
    pub rank: usize,
}

/// Largest surprisal variance on the two-level family and the bound `sqrt(2 f_max)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaResult {
    pub dim: usize,
    pub gamma: f64,
    pub f_max: f64,
    pub capacity_bound: f64,
}

impl GammaResult {
    /// `(gamma, (1-gamma)/(d-1), ..., (1-gamma)/(d-1))`
    pub fn distribution(&self) -> ProbabilityVector {
        ProbabilityVector::new(family(self.dim, self.gamma)).expect("family is on the simplex")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremCheck {
    pub dim: usize,
    /// Rate of the Hölder-saturating Hamiltonian at the optimal state.
    pub lhs: f64,
    /// `sqrt(2 f_max)`
    pub rhs: f64,
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct GridOracleResult {
    pub best_p: ProbabilityVector,
    pub f_best: f64,
    pub points: usize,
}

fn family(dim: usize, gamma: f64) -> Vec<f64> {
    let tail = (1.0 - gamma) / (dim - 1) as f64;
    let mut p = vec![tail; dim];
    p[0] = gamma;
    p
}

/// Surprisal variance of the two-level family, written as the variance of a two-valued
/// variable: `gamma (1-gamma) log2^2((1-gamma) / ((d-1) gamma))`.
fn family_variance(dim: usize, gamma: f64) -> f64 {
    let l = ((1.0 - gamma) / ((dim - 1) as f64 * gamma)).log2();
    gamma * (1.0 - gamma) * l * l
}

/// Stationarity condition of the family variance, `(1 - 2 gamma) ln((1-gamma)/((d-1) gamma)) - 2`.
fn family_stationarity(dim: usize, gamma: f64) -> f64 {
    (1.0 - 2.0 * gamma) * ((1.0 - gamma) / ((dim - 1) as f64 * gamma)).ln() - 2.0
}

/// Maximizes the family variance on `[lo, hi]`: golden-section to a `1e-10` bracket, then
/// bisection on the stationarity condition, which resolves the peak far below the
/// `sqrt(eps)` limit of function-value comparisons.
fn family_peak(dim: usize, lo: f64, hi: f64) -> (f64, f64) {
    let f = |g: f64| family_variance(dim, g);
    let br = golden_section_max(f, lo, hi, BRACKET_TOL);
    let widen = 1e-6;
    let polished = bisect_root(
        |g| family_stationarity(dim, g),
        (br.lo - widen).max(lo),
        (br.hi + widen).min(hi),
    );
    match polished {
        Some(g) if f(g) >= br.fx - 4.0 * f64::EPSILON * br.fx => (g, f(g)),
        _ => (br.x, br.fx),
    }
}

/// Maximum of the surprisal variance over `(gamma, (1-gamma)/(d-1), ...)`.
///
/// The family variance vanishes at `gamma = 0`, `1/d` and `1`, so each of the two humps is
/// searched separately. For `d = 2` the humps mirror each other and the lower one
/// (`gamma < 1/2`) is returned.
pub fn max_surprisal_variance(dim: usize) -> Result<GammaResult> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    let split = 1.0 / dim as f64;
    let (g_lo, f_lo) = family_peak(dim, GAMMA_EPS, split);
    let (g_hi, f_hi) = family_peak(dim, split, 1.0 - GAMMA_EPS);
    let (gamma, f_max) = if f_hi > f_lo * (1.0 + 1e-12) {
        (g_hi, f_hi)
    } else {
        (g_lo, f_lo)
    };
    Ok(GammaResult {
        dim,
        gamma,
        f_max,
        capacity_bound: (2.0 * f_max).sqrt(),
    })
}

/// `|psi> = sqrt(gamma)|0> + sqrt((1-gamma)/(d-1)) sum_{i>=1} |i>`.
pub fn optimal_state(dim: usize, gamma: f64) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma(gamma));
    }
    let amps = family(dim, gamma)
        .into_iter()
        .map(|p| Complex64::new(p.sqrt(), 0.0))
        .collect();
    PureState::new(amps)
}

/// `H = (i/sqrt 2)(|0><phi| - |phi><0|)` with `|phi> = sum_{i>=1} |i> / sqrt(d-1)`.
///
/// The overall sign is chosen so that `H` raises coherence at
/// `optimal_state(d, gamma*)`: `+` when `gamma* < 1/d` (always the case for `d = 2`),
/// `-` otherwise. Unit Hilbert-Schmidt norm.
pub fn optimal_hamiltonian(dim: usize) -> Result<HermitianMatrix> {
    let opt = max_surprisal_variance(dim)?;
    let sign = if opt.gamma < 1.0 / dim as f64 {
        1.0
    } else {
        -1.0
    };
    let a = sign / (2.0 * (dim - 1) as f64).sqrt();
    let m = ComplexMatrix::from_fn(dim, |i, j| match (i, j) {
        (0, j) if j > 0 => Complex64::new(0.0, a),
        (i, 0) if i > 0 => Complex64::new(0.0, -a),
        _ => Complex64::new(0.0, 0.0),
    });
    HermitianMatrix::new(m)
}

/// `H = M / ||M||_2`, the unit-norm Hamiltonian that saturates `Tr(HM) <= ||H||_2 ||M||_2`.
pub fn holder_hamiltonian(rho: &DensityMatrix) -> Result<HermitianMatrix> {
    let m = commutator_m(rho);
    let n = hs_norm(m.matrix());
    if !(n > 1e-14) {
        return Err(Error::ZeroCommutator(n));
    }
    Ok(m.scale(1.0 / n))
}

/// Both sides of `max_{||H||_2<=1} C_gen(H) = sqrt(2 f_max)` for dimension `dim`.
pub fn theorem1_check(dim: usize) -> Result<TheoremCheck> {
    let opt = max_surprisal_variance(dim)?;
    let sigma = optimal_state(dim, opt.gamma)?.density();
    let h = holder_hamiltonian(&sigma)?;
    let lhs = coherence_derivative(&h, &sigma)?.analytic;
    let rhs = opt.capacity_bound;
    Ok(TheoremCheck {
        dim,
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// `g(x) = sqrt(x(1-x)) log2((1-x)/x)`
fn qubit_profile(x: f64) -> f64 {
    (x * (1.0 - x)).sqrt() * ((1.0 - x) / x).log2()
}

/// Maximizer of `g` on `(0, 1/2)`, about 0.0832.
pub fn qubit_optimal_population() -> f64 {
    family_peak(2, GAMMA_EPS, 0.5).0
}

/// Exact capacity of a qubit Hamiltonian: `2 |H_10| max_x g(x)`.
pub fn capacity_qubit(h: &HermitianMatrix) -> Result<CapacityResult> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch(h.dim(), 2));
    }
    let h10 = h.get(1, 0);
    let coupling = h10.norm();
    if coupling == 0.0 {
        let state = DensityMatrix::diagonal_state(&[1.0, 0.0])?;
        return Ok(CapacityResult {
            value: 0.0,
            argmax_state: state,
            method: Method::QubitAnalytic,
            restarts_used: 0,
            converged: true,
            min_diag: 0.0,
            best_restart: 0,
            grad_norm: 0.0,
        });
    }
    let x = qubit_optimal_population();
    let beta = h.get(0, 1).arg();
    let alpha = beta - core::f64::consts::FRAC_PI_2;
    let off = Complex64::from_polar((x * (1.0 - x)).sqrt(), alpha);
    let m = ComplexMatrix::new(
        2,
        vec![
            Complex64::new(x, 0.0),
            off,
            off.conj(),
            Complex64::new(1.0 - x, 0.0),
        ],
    )?;
    let state = DensityMatrix::from_hermitian_unchecked(HermitianMatrix::new(m)?);
    Ok(CapacityResult {
        value: 2.0 * coupling * qubit_profile(x),
        argmax_state: state,
        method: Method::QubitAnalytic,
        restarts_used: 0,
        converged: true,
        min_diag: x,
        best_restart: 0,
        grad_norm: 0.0,
    })
}

/// Working state of one ascent: the factor `A` (row-major `dim x rank`) and `rho = A A^dagger`.
struct Ascent<'a> {
    h: &'a ComplexMatrix,
    dim: usize,
    rank: usize,
}

struct Eval {
    value: f64,
    /// Projected (tangent, bound-masked) gradient.
    tangent: Vec<Complex64>,
    grad_norm: f64,
}

impl Ascent<'_> {
    fn gram(&self, a: &[Complex64]) -> ComplexMatrix {
        let (d, r) = (self.dim, self.rank);
        ComplexMatrix::from_fn(d, |i, j| {
            (0..r).map(|c| a[i * r + c] * a[j * r + c].conj()).sum()
        })
    }

    fn row_norm_sqr(&self, a: &[Complex64], k: usize) -> f64 {
        a[k * self.rank..(k + 1) * self.rank]
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Normalizes to unit Frobenius norm and lifts rows below the population floor.
    fn retract(&self, a: &mut [Complex64]) {
        normalize(a);
        let r = self.rank;
        let mut lifted = false;
        for k in 0..self.dim {
            let n2 = self.row_norm_sqr(a, k);
            if n2 < POPULATION_FLOOR {
                let row = &mut a[k * r..(k + 1) * r];
                if n2 > 0.0 {
                    let s = (POPULATION_FLOOR / n2).sqrt();
                    row.iter_mut().for_each(|z| *z *= s);
                } else {
                    row[0] = Complex64::new(POPULATION_FLOOR.sqrt(), 0.0);
                }
                lifted = true;
            }
        }
        if lifted {
            normalize(a);
        }
    }

    /// Objective `Tr(H M(A A^dagger))` and its projected gradient with respect to `A`.
    ///
    /// With `L = diag(log2 rho_ii)` the differential is `Tr(G d rho)` for the Hermitian
    /// `G = i[L, H] + diag(Re(i[H, rho]_kk) / (rho_kk ln 2))`, so the Euclidean gradient in
    /// `A` is `2 G A`. It is projected onto the tangent space of the unit sphere; rows
    /// sitting on the population floor with the gradient pointing further down are masked
    /// out, which turns the floor into a bound constraint.
    fn evaluate(&self, a: &[Complex64]) -> Eval {
        let (d, r, h) = (self.dim, self.rank, self.h);
        let rho = self.gram(a);
        let value = derivative_raw(h, &rho).re;
        let pops: Vec<f64> = (0..d).map(|i| rho.get(i, i).re).collect();
        let logs = log2_populations(&pops);
        let ln2 = core::f64::consts::LN_2;

        let comm = ComplexMatrix::commutator(h, &rho);
        let g = ComplexMatrix::from_fn(d, |i, j| {
            let mut z = h.get(i, j) * Complex64::new(0.0, logs[i] - logs[j]);
            if i == j && pops[i] >= ZERO_DIAGONAL {
                z += Complex64::new(-comm.get(i, i).im / (pops[i] * ln2), 0.0);
            }
            z
        });

        let mut grad = vec![Complex64::new(0.0, 0.0); d * r];
        for i in 0..d {
            for k in 0..d {
                let gik = g.get(i, k);
                for c in 0..r {
                    grad[i * r + c] += gik * a[k * r + c] * 2.0;
                }
            }
        }
        let radial: f64 = a.iter().zip(&grad).map(|(x, y)| (x.conj() * y).re).sum();
        let mut tangent: Vec<Complex64> = grad.iter().zip(a).map(|(g, x)| g - x * radial).collect();

        for k in 0..d {
            if self.row_norm_sqr(a, k) <= POPULATION_FLOOR * (1.0 + 1e-6) {
                let rows = k * r..(k + 1) * r;
                let outward: f64 = a[rows.clone()]
                    .iter()
                    .zip(&tangent[rows.clone()])
                    .map(|(x, t)| (x.conj() * t).re)
                    .sum();
                if outward < 0.0 {
                    tangent[rows]
                        .iter_mut()
                        .for_each(|t| *t = Complex64::new(0.0, 0.0));
                }
            }
        }
        let grad_norm = tangent.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Eval {
            value,
            tangent,
            grad_norm,
        }
    }
}

fn normalize(a: &mut [Complex64]) {
    let n = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    a.iter_mut().for_each(|z| *z /= n);
}

fn density_from_factor(a: &[Complex64], dim: usize, rank: usize) -> DensityMatrix {
    let rho = ComplexMatrix::from_fn(dim, |i, j| {
        (0..rank)
            .map(|c| a[i * rank + c] * a[j * rank + c].conj())
            .sum()
    });
    let tr = rho.trace().re;
    DensityMatrix::from_hermitian_unchecked(HermitianMatrix::symmetrized(
        rho.scale(Complex64::new(1.0 / tr, 0.0)),
    ))
}

/// Runs restart `index` of the ascent. Deterministic in `(cfg.seed, index)`, so restarts
/// can be evaluated in any order or in parallel and reduced with [`reduce_restarts`].
pub fn ascend_restart(h: &HermitianMatrix, cfg: &SolverConfig, index: usize) -> RestartOutcome {
    let dim = h.dim();
    let rank = if cfg.mixed { dim } else { 1 };
    let problem = Ascent {
        h: h.matrix(),
        dim,
        rank,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut a: Vec<Complex64> = (0..dim * rank)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    problem.retract(&mut a);

    let mut cur = problem.evaluate(&a);
    let mut step = cfg.step_init;
    let max_step = cfg.step_init * 1e3;
    let mut iterations = 0;
    let mut converged = cur.grad_norm <= cfg.grad_tol;
    while !converged && iterations < cfg.max_iters {
        iterations += 1;
        let mut accepted = None;
        let mut s = step;
        while s > cfg.step_init * 1e-20 {
            let mut trial: Vec<Complex64> =
                a.iter().zip(&cur.tangent).map(|(x, t)| x + t * s).collect();
            problem.retract(&mut trial);
            let next = problem.evaluate(&trial);
            let armijo = next.value >= cur.value + ARMIJO * s * cur.grad_norm * cur.grad_norm;
            // once the predicted gain drops below rounding in the objective, accept steps
            // that keep the value and shrink the gradient
            let noise = 8.0 * f64::EPSILON * (1.0 + cur.value.abs());
            let flat = next.value >= cur.value - noise && next.grad_norm < cur.grad_norm;
            if armijo || flat {
                accepted = Some((trial, next, s));
                break;
            }
            s *= 0.5;
        }
        match accepted {
            Some((trial, next, s)) => {
                // Barzilai-Borwein step from the last displacement and gradient change
                let mut dx2 = 0.0;
                let mut dxdg = 0.0;
                for k in 0..a.len() {
                    let dx = trial[k] - a[k];
                    dx2 += dx.norm_sqr();
                    dxdg += (dx.conj() * (next.tangent[k] - cur.tangent[k])).re;
                }
                step = if dxdg < 0.0 {
                    (dx2 / -dxdg).clamp(cfg.step_init * 1e-6, max_step)
                } else {
                    (2.0 * s).min(max_step)
                };
                a = trial;
                cur = next;
                converged = cur.grad_norm <= cfg.grad_tol;
            }
            None => break,
        }
    }
    RestartOutcome {
        index,
        value: cur.value,
        grad_norm: cur.grad_norm,
        iterations,
        converged,
        factor: a,
        rank,
    }
}

/// Reduces restart outcomes by maximum value; ties go to the lowest restart index.
pub fn reduce_restarts(
    h: &HermitianMatrix,
    cfg: &SolverConfig,
    mut outcomes: Vec<RestartOutcome>,
) -> Result<CapacityResult> {
    if outcomes.is_empty() {
        return Err(Error::InvalidConfig("restarts must be at least 1"));
    }
    outcomes.sort_by_key(|o| o.index);
    let converged = outcomes.iter().any(|o| o.converged);
    let mut best = 0;
    for (k, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = k;
        }
    }
    let b = &outcomes[best];
    let dim = h.dim();
    let method = if cfg.mixed {
        Method::MixedStateAscent
    } else {
        Method::PureStateAscent
    };
    let mut state = density_from_factor(&b.factor, dim, b.rank);
    let mut value = coherence_derivative(h, &state)?.analytic;
    if !(value > 0.0) {
        // the incoherent state always achieves zero
        state = DensityMatrix::diagonal_state(&{
            let mut p = vec![0.0; dim];
            p[0] = 1.0;
            p
        })?;
        value = 0.0;
    }
    let result = CapacityResult {
        value,
        min_diag: state.min_population(),
        argmax_state: state,
        method,
        restarts_used: outcomes.len(),
        converged,
        best_restart: b.index,
        grad_norm: b.grad_norm,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(Box::new(result)))
    }
}

/// `C_gen(H)` by projected gradient ascent with `cfg.restarts` seeded restarts.
pub fn capacity_numeric(h: &HermitianMatrix, cfg: &SolverConfig) -> Result<CapacityResult> {
    cfg.validate()?;
    if h.dim() < 2 {
        return Err(Error::InvalidDimension(h.dim()));
    }
    let outcomes = (0..cfg.restarts)
        .map(|i| ascend_restart(h, cfg, i))
        .collect();
    reduce_restarts(h, cfg, outcomes)
}

/// Exhaustive scan of the simplex grid `{k / resolution}` for the largest surprisal
/// variance. Independent check on the optimality of the two-level family.
pub fn simplex_grid_oracle(dim: usize, resolution: usize) -> Result<GridOracleResult> {
    if !(2..=4).contains(&dim) {
        return Err(Error::InvalidDimension(dim));
    }
    if resolution > MAX_GRID_RESOLUTION {
        return Err(Error::ResolutionTooLarge(resolution));
    }
    if resolution == 0 {
        return Err(Error::InvalidConfig("resolution must be positive"));
    }
    let n = resolution as f64;
    let mut counts = vec![0usize; dim];
    let mut best_counts = counts.clone();
    let mut best_f = f64::NEG_INFINITY;
    let mut points = 0;
    scan(&mut counts, 0, resolution, &mut |c| {
        points += 1;
        let f = variance_of_counts(c, n);
        // strict improvement keeps the lexicographically first maximizer on ties
        if f > best_f + 1e-14 {
            best_f = f;
            best_counts.copy_from_slice(c);
        }
    });
    let best_p = ProbabilityVector::new(best_counts.iter().map(|&k| k as f64 / n).collect())?;
    Ok(GridOracleResult {
        best_p,
        f_best: best_f,
        points,
    })
}

fn variance_of_counts(counts: &[usize], n: f64) -> f64 {
    let mut first = 0.0;
    let mut second = 0.0;
    for &k in counts {
        if k > 0 {
            let p = k as f64 / n;
            let s = -p.log2();
            first += p * s;
            second += p * s * s;
        }
    }
    (second - first * first).max(0.0)
}

fn scan(counts: &mut [usize], pos: usize, remaining: usize, visit: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        visit(counts);
        return;
    }
    for k in 0..=remaining {
        counts[pos] = k;
        scan(counts, pos + 1, remaining - k, visit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{surprisal_variance, surprisal_variance_pairform};
    use crate::sampling;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sigma_y_over_sqrt2() -> HermitianMatrix {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        HermitianMatrix::new(
            ComplexMatrix::new(2, vec![c(0., 0.), c(0., -s), c(0., s), c(0., 0.)]).unwrap(),
        )
        .unwrap()
    }

    // Frozen from a 30-digit evaluation of the stationarity condition (mpmath) and
    // cross-checked by dense scans in the integration tests.
    const X_STAR: f64 = 0.083_221_720_199_517_65;
    const F_MAX_2: f64 = 0.914_197_282_911_467_3;
    const BOUND_2: f64 = 1.352_181_410_101_076_2;

    #[test]
    fn family_variance_matches_general_formula() {
        for d in 2..7 {
            for &g in &[0.01, 0.2, 0.5, 0.9] {
                let p = ProbabilityVector::new(family(d, g)).unwrap();
                assert!((family_variance(d, g) - surprisal_variance(&p)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn qubit_population_and_bound() {
        let x = qubit_optimal_population();
        assert!((x - X_STAR).abs() < 1e-10, "x* = {x}");
        let r = max_surprisal_variance(2).unwrap();
        assert!((r.gamma - X_STAR).abs() < 1e-10);
        assert!((r.f_max - F_MAX_2).abs() < 1e-14);
        assert!((r.capacity_bound - BOUND_2).abs() < 1e-14);
        assert_eq!(family_variance(2, 0.5), 0.0);
    }

    #[test]
    fn upper_hump_wins_from_three_levels() {
        for d in 3..9 {
            let r = max_surprisal_variance(d).unwrap();
            assert!(r.gamma > 1.0 / d as f64, "d = {d}: gamma = {}", r.gamma);
        }
        assert!(matches!(
            max_surprisal_variance(1),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn qubit_capacity_examples() {
        let diag = HermitianMatrix::from_real_diagonal(&[
            core::f64::consts::FRAC_1_SQRT_2,
            -core::f64::consts::FRAC_1_SQRT_2,
        ]);
        let r = capacity_qubit(&diag).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.argmax_state.populations(), vec![1.0, 0.0]);

        let r = capacity_qubit(&sigma_y_over_sqrt2()).unwrap();
        assert!((r.value - BOUND_2).abs() < 1e-14);
        assert!((r.argmax_state.get(0, 0).re - 0.083).abs() < 1e-3);
        let rate = coherence_derivative(&sigma_y_over_sqrt2(), &r.argmax_state)
            .unwrap()
            .analytic;
        assert!((rate - r.value).abs() < 1e-14);

        let sx = HermitianMatrix::new(
            ComplexMatrix::new(2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap(),
        )
        .unwrap();
        let r = capacity_qubit(&sx).unwrap();
        assert!((r.value - 2.0 * BOUND_2 / 2f64.sqrt()).abs() < 1e-13);
        assert!((r.value - 1.912_273_288_953_718).abs() < 1e-12);
        assert!(matches!(
            capacity_qubit(&HermitianMatrix::zeros(3)),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn optimal_state_examples() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let psi = optimal_state(2, 0.5).unwrap();
        assert!((psi.amplitudes()[0] - c(s, 0.0)).norm() < 1e-15);
        assert!((psi.amplitudes()[1] - c(s, 0.0)).norm() < 1e-15);
        let psi = optimal_state(2, 0.083).unwrap();
        assert!((psi.amplitudes()[0].re - 0.083f64.sqrt()).abs() < 1e-15);
        assert!((psi.amplitudes()[1].re - 0.917f64.sqrt()).abs() < 1e-15);
        let psi = optimal_state(4, 0.25).unwrap();
        assert!(psi
            .amplitudes()
            .iter()
            .all(|z| (z - c(0.5, 0.0)).norm() < 1e-15));
        assert!(matches!(optimal_state(3, 1.0), Err(Error::InvalidGamma(_))));
        assert!(matches!(optimal_state(3, 0.0), Err(Error::InvalidGamma(_))));
    }

    #[test]
    fn optimal_hamiltonian_examples() {
        let h = optimal_hamiltonian(2).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((h.get(0, 1) - c(0.0, s)).norm() < 1e-15);
        assert!((h.get(1, 0) - c(0.0, -s)).norm() < 1e-15);
        for d in 2..10 {
            let h = optimal_hamiltonian(d).unwrap();
            assert!((hs_norm(h.matrix()) - 1.0).abs() < 1e-14);
        }
        for d in 2..7 {
            let opt = max_surprisal_variance(d).unwrap();
            let sigma = optimal_state(d, opt.gamma).unwrap().density();
            let rate = coherence_derivative(&optimal_hamiltonian(d).unwrap(), &sigma)
                .unwrap()
                .analytic;
            assert!(
                (rate - opt.capacity_bound).abs() < 1e-8,
                "d = {d}: {rate} vs {}",
                opt.capacity_bound
            );
        }
    }

    #[test]
    fn holder_examples() {
        let diag = DensityMatrix::diagonal_state(&[0.2, 0.8]).unwrap();
        assert!(matches!(
            holder_hamiltonian(&diag),
            Err(Error::ZeroCommutator(_))
        ));
        let plus = optimal_state(2, 0.5).unwrap().density();
        assert!(matches!(
            holder_hamiltonian(&plus),
            Err(Error::ZeroCommutator(_))
        ));

        let sigma = optimal_state(2, 0.083).unwrap().density();
        let h = holder_hamiltonian(&sigma).unwrap();
        // -sigma_y / sqrt 2
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((h.get(0, 1) - c(0.0, s)).norm() < 1e-14);
        let rate = coherence_derivative(&h, &sigma).unwrap().analytic;
        assert!((rate - hs_norm(commutator_m(&sigma).matrix())).abs() < 1e-14);
        assert!((rate - 1.352_179_980_366).abs() < 1e-11);
    }

    #[test]
    fn capacity_bound_gap_small() {
        for d in 2..=6 {
            let chk = theorem1_check(d).unwrap();
            assert!(chk.gap <= 1e-8, "{chk:?}");
        }
    }

    #[test]
    fn pure_states_saturate_entrywise_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 2..6 {
            let sigma = sampling::random_pure_state(&mut rng, d).density();
            let m2 = hs_norm(commutator_m(&sigma).matrix()).powi(2);
            assert!((m2 - 2.0 * surprisal_variance_pairform(&sigma)).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_oracle_examples() {
        let r = simplex_grid_oracle(2, 400).unwrap();
        assert!((r.best_p.probs()[0] - X_STAR).abs() <= 1.0 / 400.0);
        assert!((r.best_p.probs()[0] - 0.0825).abs() < 1e-12);
        assert_eq!(r.points, 401);
        let r = simplex_grid_oracle(2, 2).unwrap();
        assert_eq!(r.f_best, 0.0);
        assert!(matches!(
            simplex_grid_oracle(2, 401),
            Err(Error::ResolutionTooLarge(401))
        ));
        assert!(matches!(
            simplex_grid_oracle(5, 10),
            Err(Error::InvalidDimension(5))
        ));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (dim, rank) in [(2, 1), (3, 1), (4, 1), (3, 3)] {
            let h = sampling::random_hermitian(&mut rng, dim);
            let problem = Ascent {
                h: h.matrix(),
                dim,
                rank,
            };
            let mut a: Vec<Complex64> =
                sampling::ginibre(&mut rng, dim).as_slice()[..dim * rank].to_vec();
            normalize(&mut a);
            let e = problem.evaluate(&a);
            // directional derivative along a random tangent direction, curve through retraction
            let mut v: Vec<Complex64> =
                sampling::ginibre(&mut rng, dim).as_slice()[..dim * rank].to_vec();
            let radial: f64 = a.iter().zip(&v).map(|(x, y)| (x.conj() * y).re).sum();
            v.iter_mut().zip(&a).for_each(|(y, x)| *y -= x * radial);
            let eps = 1e-6;
            let at = |t: f64| {
                let mut b: Vec<Complex64> = a.iter().zip(&v).map(|(x, y)| x + y * t).collect();
                normalize(&mut b);
                problem.evaluate(&b).value
            };
            let fd = (at(eps) - at(-eps)) / (2.0 * eps);
            let analytic: f64 = e
                .tangent
                .iter()
                .zip(&v)
                .map(|(g, y)| (g.conj() * y).re)
                .sum();
            assert!(
                (fd - analytic).abs() < 1e-6 * (1.0 + fd.abs()),
                "{dim}x{rank}: {fd} vs {analytic}"
            );
        }
    }

    #[test]
    fn numeric_matches_qubit() {
        let cfg = SolverConfig {
            restarts: 8,
            ..SolverConfig::default()
        };
        let r = capacity_numeric(&sigma_y_over_sqrt2(), &cfg).unwrap();
        assert!((r.value - BOUND_2).abs() < 1e-6, "{r:?}");
        assert!(r.converged);
        let zero = capacity_numeric(&HermitianMatrix::zeros(3), &cfg).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            restarts: 0,
            ..SolverConfig::default()
        };
        assert!(matches!(
            capacity_numeric(&sigma_y_over_sqrt2(), &bad),
            Err(Error::InvalidConfig(_))
        ));
        let bad = SolverConfig {
            grad_tol: -1.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
