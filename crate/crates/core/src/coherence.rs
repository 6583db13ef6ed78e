//! Dephasing, entropies, the relative entropy of coherence and its time derivative.
//!
//! Logarithms are base 2 everywhere. Terms that would need `log2(rho_ii)` with
//! `rho_ii < ZERO_DIAGONAL` are set to zero: positivity forces the accompanying
//! off-diagonal factor `rho_ij` to vanish with them.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is linked
use num_traits::Float;

use crate::linalg::{eig_hermitian, hs_inner, ComplexMatrix, DensityMatrix, HermitianMatrix};
use crate::{Error, Result, VALIDATION_TOL, ZERO_DIAGONAL};

/// Populations below this are reported as near the boundary of the state space, where
/// `log2 Delta(rho)` stops being differentiable.
pub const NEAR_BOUNDARY: f64 = 1e-10;

/// Point on the probability simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbability("empty"));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidProbability("entry outside [0, 1]"));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidProbability("entries do not sum to 1"));
        }
        Ok(Self(probs))
    }

    /// `(1/d, ..., 1/d)`
    pub fn uniform(dim: usize) -> Self {
        Self(alloc::vec![1.0 / dim as f64; dim])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn of_populations(rho: &DensityMatrix) -> Self {
        // rounding can leave a population at -1e-17; such entries are zero
        Self(
            rho.populations()
                .into_iter()
                .map(|p| p.clamp(0.0, 1.0))
                .collect(),
        )
    }
}

/// The analytic rate `dC_r(rho_t)/dt` at `t = 0` together with its inputs.
#[derive(Clone, Debug)]
pub struct DerivativeReport {
    /// `i Tr(H [rho, log2 Delta(rho)])` in bits per unit time. Signed.
    pub analytic: f64,
    /// Imaginary part of `Tr(H M)`, zero up to rounding.
    pub imag_residual: f64,
    pub min_population: f64,
    /// Some population is below [`NEAR_BOUNDARY`]; the zero-diagonal convention was used
    /// and the true one-sided derivative may differ.
    pub near_boundary: bool,
    pub state: DensityMatrix,
    pub hamiltonian: HermitianMatrix,
}

/// Complete dephasing `Delta[rho] = sum_i |i><i| rho |i><i|`.
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let pops = rho.populations();
    DensityMatrix::from_hermitian_unchecked(HermitianMatrix::from_real_diagonal(&pops))
}

/// `x log2 x` with `0 log2 0 = 0`.
#[inline]
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy in bits. Negative entries are treated as zero.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlog2x(x)).sum::<f64>()
}

/// `S(rho) = -Tr(rho log2 rho)` from the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = rho.spectrum()?;
    Ok(shannon_entropy(&spectrum).max(0.0))
}

/// `C_r(rho) = S(Delta[rho]) - S(rho)`.
///
/// The dephased entropy is read off the populations directly.
pub fn rel_entropy_coherence(rho: &DensityMatrix) -> Result<f64> {
    let dephased = shannon_entropy(&rho.populations());
    let s = von_neumann_entropy(rho)?;
    Ok((dephased - s).max(0.0))
}

/// `log2 rho_ii` with the zero-diagonal convention (entries below [`ZERO_DIAGONAL`] give 0).
pub(crate) fn log2_populations(pops: &[f64]) -> Vec<f64> {
    pops.iter()
        .map(|&p| if p < ZERO_DIAGONAL { 0.0 } else { p.log2() })
        .collect()
}

/// `log2 Delta(B)` for a matrix with strictly positive diagonal.
pub fn log2_dephased(b: &HermitianMatrix) -> Result<HermitianMatrix> {
    let diag = b.real_diagonal();
    let min = diag.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::SingularState(min));
    }
    let logs: Vec<f64> = diag.iter().map(|p| p.log2()).collect();
    Ok(HermitianMatrix::from_real_diagonal(&logs))
}

/// Elementwise `M_ij = i rho_ij (L_j - L_i)` with `L = log2 populations`.
pub(crate) fn commutator_raw(rho: &ComplexMatrix) -> ComplexMatrix {
    let d = rho.dim();
    let pops: Vec<f64> = (0..d).map(|i| rho.get(i, i).re).collect();
    let logs = log2_populations(&pops);
    ComplexMatrix::from_fn(d, |i, j| {
        if i == j || pops[i] < ZERO_DIAGONAL || pops[j] < ZERO_DIAGONAL {
            Complex64::new(0.0, 0.0)
        } else {
            rho.get(i, j) * Complex64::new(0.0, logs[j] - logs[i])
        }
    })
}

/// `M = i [rho, log2 Delta(rho)]`.
pub fn commutator_m(rho: &DensityMatrix) -> HermitianMatrix {
    // exactly Hermitian entrywise already: M_ji = conj(M_ij)
    HermitianMatrix::symmetrized(commutator_raw(rho.matrix()))
}

/// `Tr(H M)` for raw matrices; returns real and imaginary parts.
pub(crate) fn derivative_raw(h: &ComplexMatrix, rho: &ComplexMatrix) -> Complex64 {
    let d = h.dim();
    let pops: Vec<f64> = (0..d).map(|i| rho.get(i, i).re).collect();
    let logs = log2_populations(&pops);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        if pops[i] < ZERO_DIAGONAL {
            continue;
        }
        for j in 0..d {
            if i == j || pops[j] < ZERO_DIAGONAL {
                continue;
            }
            // H_ji M_ij
            acc += h.get(j, i) * rho.get(i, j) * Complex64::new(0.0, logs[j] - logs[i]);
        }
    }
    acc
}

/// Analytic coherence rate `dC_r/dt |_{t=0} = Tr(H M)` under `exp(-iHt)`.
pub fn coherence_derivative(h: &HermitianMatrix, rho: &DensityMatrix) -> Result<DerivativeReport> {
    if h.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(h.dim(), rho.dim()));
    }
    let m = commutator_m(rho);
    let z = hs_inner(h.matrix(), m.matrix())?;
    debug_assert!(
        z.im.abs() <= 1e-10 * (1.0 + z.re.abs()),
        "Tr(HM) not real: {z}"
    );
    let min_population = rho.min_population();
    Ok(DerivativeReport {
        analytic: z.re,
        imag_residual: z.im,
        min_population,
        near_boundary: min_population < NEAR_BOUNDARY,
        state: rho.clone(),
        hamiltonian: h.clone(),
    })
}

/// Variance of the surprisal `-log2 p_i`:
/// `f(p) = sum_i p_i (log2 p_i)^2 - (sum_i p_i log2 p_i)^2`, with `0 (log 0)^2 = 0`.
pub fn surprisal_variance(p: &ProbabilityVector) -> f64 {
    let mut second = 0.0;
    let mut first = 0.0;
    for &x in p.probs() {
        if x > 0.0 {
            let s = -x.log2();
            first += x * s;
            second += x * s * s;
        }
    }
    (second - first * first).max(0.0)
}

/// Pairwise form `f(rho) = 1/2 sum_{i,j} rho_ii rho_jj (log2 rho_jj - log2 rho_ii)^2`.
pub fn surprisal_variance_pairform(rho: &DensityMatrix) -> f64 {
    pairform(&rho.populations())
}

pub(crate) fn pairform(pops: &[f64]) -> f64 {
    let logs = log2_populations(pops);
    let mut acc = 0.0;
    for i in 0..pops.len() {
        if pops[i] < ZERO_DIAGONAL {
            continue;
        }
        for j in (i + 1)..pops.len() {
            if pops[j] < ZERO_DIAGONAL {
                continue;
            }
            let g = logs[j] - logs[i];
            acc += pops[i] * pops[j] * g * g;
        }
    }
    // the i<j half of the symmetric double sum already carries the factor 1/2
    acc
}

/// Spectral `log2 rho` for a full-rank state.
pub(crate) fn log2_state(rho: &DensityMatrix, min_eigenvalue: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(rho.hermitian())?;
    if eig.values[0] < min_eigenvalue {
        return Err(Error::SingularState(eig.values[0]));
    }
    Ok(eig.map(|l| Complex64::new(l.log2(), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hs_norm, validate_density, PureState};
    use crate::sampling;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> DensityMatrix {
        validate_density(ComplexMatrix::from_fn(2, |_, _| c(0.5, 0.0))).unwrap()
    }

    fn pure_q(q0: f64) -> DensityMatrix {
        PureState::new(vec![c(q0.sqrt(), 0.0), c((1.0 - q0).sqrt(), 0.0)])
            .unwrap()
            .density()
    }

    // Binary entropy oracle, scalar evaluation.
    fn h2(x: f64) -> f64 {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }

    #[test]
    fn dephase_examples() {
        let d = dephase(&plus());
        assert_eq!(d.populations(), vec![0.5, 0.5]);
        assert_eq!(d.get(0, 1), c(0.0, 0.0));
        let diag = DensityMatrix::diagonal_state(&[0.2, 0.3, 0.5]).unwrap();
        assert_eq!(dephase(&diag), diag);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = sampling::random_density(&mut rng, 4);
        assert_eq!(dephase(&dephase(&rho)), dephase(&rho));
        assert!((dephase(&rho).matrix().trace().re - rho.matrix().trace().re).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&plus()).unwrap().abs() < 1e-14);
        assert!(
            (von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-15
        );
        let rho = DensityMatrix::diagonal_state(&[0.25, 0.75]).unwrap();
        // -0.25 log2 0.25 - 0.75 log2 0.75 = 0.5 + 0.311278...
        let expected = 0.5 + 0.75 * (4.0f64 / 3.0).log2();
        assert!((von_neumann_entropy(&rho).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn coherence_examples() {
        assert!((rel_entropy_coherence(&plus()).unwrap() - 1.0).abs() < 1e-13);
        let diag = DensityMatrix::diagonal_state(&[0.3, 0.7]).unwrap();
        assert_eq!(rel_entropy_coherence(&diag).unwrap(), 0.0);
        let c_r = rel_entropy_coherence(&pure_q(0.083)).unwrap();
        assert!((c_r - h2(0.083)).abs() < 1e-13);
        assert!((c_r - 0.412_662_655_9).abs() < 1e-9);
    }

    #[test]
    fn commutator_examples() {
        let diag = DensityMatrix::diagonal_state(&[0.3, 0.7]).unwrap();
        assert_eq!(hs_norm(commutator_m(&diag).matrix()), 0.0);
        assert_eq!(hs_norm(commutator_m(&plus()).matrix()), 0.0);

        let q = 0.083f64;
        let m = commutator_m(&pure_q(q));
        let coeff = (q * (1.0 - q)).sqrt() * ((1.0 - q) / q).log2();
        assert!((coeff - 0.956_135_633_5).abs() < 1e-9);
        assert!((m.get(0, 1) - c(0.0, coeff)).norm() < 1e-14);
        assert!((m.get(1, 0) - c(0.0, -coeff)).norm() < 1e-14);
        assert_eq!(m.get(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn zero_population_terms_vanish() {
        let rho = DensityMatrix::diagonal_state(&[1.0, 0.0, 0.0]).unwrap();
        let m = commutator_m(&rho);
        assert!(m
            .matrix()
            .as_slice()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite()));
        assert_eq!(surprisal_variance_pairform(&rho), 0.0);
        let h = sampling::random_hermitian(&mut ChaCha8Rng::seed_from_u64(2), 3);
        let rep = coherence_derivative(&h, &rho).unwrap();
        assert_eq!(rep.analytic, 0.0);
        assert!(rep.near_boundary);
    }

    #[test]
    fn derivative_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = sampling::random_hermitian(&mut rng, 2);
        let diag = DensityMatrix::diagonal_state(&[0.4, 0.6]).unwrap();
        assert_eq!(coherence_derivative(&h, &diag).unwrap().analytic, 0.0);
        assert_eq!(coherence_derivative(&h, &plus()).unwrap().analytic, 0.0);

        // H = sigma_y / sqrt 2, rho01 phase alpha = beta - pi/2 with beta = arg(H01) = -pi/2
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let sy = HermitianMatrix::new(
            ComplexMatrix::new(2, vec![c(0., 0.), c(0., -s), c(0., s), c(0., 0.)]).unwrap(),
        )
        .unwrap();
        let q = 0.083f64;
        let off = (q * (1.0 - q)).sqrt() * c(0.0, -core::f64::consts::PI).exp();
        let rho = validate_density(
            ComplexMatrix::new(2, vec![c(q, 0.), off, off.conj(), c(1.0 - q, 0.)]).unwrap(),
        )
        .unwrap();
        let rep = coherence_derivative(&sy, &rho).unwrap();
        let qubit_formula = 2.0 * s * (q * (1.0 - q)).sqrt() * ((1.0 - q) / q).log2();
        assert!((rep.analytic - qubit_formula).abs() < 1e-14);
        assert!((rep.analytic - 1.352_179_980_366).abs() < 1e-11);
        assert!(!rep.near_boundary);
        assert!(matches!(
            coherence_derivative(&HermitianMatrix::zeros(3), &rho),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn surprisal_examples() {
        for d in 1..8 {
            assert!(surprisal_variance(&ProbabilityVector::uniform(d)) < 1e-15);
        }
        assert_eq!(
            surprisal_variance(&ProbabilityVector::new(vec![1.0, 0.0]).unwrap()),
            0.0
        );
        let q = 0.083f64;
        // two-outcome variance: q (1-q) (log2((1-q)/q))^2
        let two_point = q * (1.0 - q) * ((1.0 - q) / q).log2().powi(2);
        let p = ProbabilityVector::new(vec![q, 1.0 - q]).unwrap();
        assert!((surprisal_variance(&p) - two_point).abs() < 1e-14);
        assert!((two_point - 0.914_195_350).abs() < 1e-8);

        assert!(surprisal_variance_pairform(&DensityMatrix::maximally_mixed(2)).abs() < 1e-15);
        let rho = DensityMatrix::diagonal_state(&[q, 1.0 - q]).unwrap();
        assert!((surprisal_variance_pairform(&rho) - two_point).abs() < 1e-14);
    }

    #[test]
    fn probability_vector_validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbabilityVector::new(vec![-0.1, 1.1]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
    }

    #[test]
    fn log2_dephased_requires_positive_diagonal() {
        let b = HermitianMatrix::from_real_diagonal(&[0.5, 0.0]);
        assert!(matches!(log2_dephased(&b), Err(Error::SingularState(_))));
        let b = HermitianMatrix::from_real_diagonal(&[0.5, 2.0]);
        assert_eq!(log2_dephased(&b).unwrap().real_diagonal(), vec![-1.0, 1.0]);
    }
}
