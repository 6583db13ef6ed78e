//! Seeded random instances for tests, oracles and solver restarts.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{unitary_exp, ComplexMatrix, DensityMatrix, HermitianMatrix, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Complex Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian(rng))
}

/// GUE-style Hermitian matrix `(G + G^dagger) / 2`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let g = ginibre(rng, dim);
    HermitianMatrix::symmetrized(g)
}

/// Random Hermitian matrix rescaled to unit Hilbert-Schmidt norm.
pub fn random_unit_hamiltonian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    loop {
        let h = random_hermitian(rng, dim);
        let n = crate::linalg::hs_norm(h.matrix());
        if n > 1e-8 {
            return h.scale(1.0 / n);
        }
    }
}

/// Haar-uniform pure state.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

/// Full-rank mixed state from the Hilbert-Schmidt ensemble `G G^dagger / Tr(G G^dagger)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    loop {
        if let Ok(rho) = DensityMatrix::from_factor(&ginibre(rng, dim)) {
            return rho;
        }
    }
}

/// Hilbert-Schmidt state whose populations are all at least `min_population`.
///
/// Rejection sampling; `min_population` must be well below `1/dim`.
pub fn random_full_support_density<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    min_population: f64,
) -> DensityMatrix {
    assert!(
        min_population * (dim as f64) < 0.5,
        "population floor too high for rejection"
    );
    loop {
        let rho = random_density(rng, dim);
        if rho.min_population() >= min_population {
            return rho;
        }
    }
}

/// Random unitary `exp(-i H)` for a GUE draw `H` scaled to spread the spectrum over a few
/// multiples of `pi`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, dim).scale(3.0);
    unitary_exp(&h, 1.0).expect("eigensolver converges on GUE draws")
}

/// Uniform point on the probability simplex.
pub fn random_probability<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..dim)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}
