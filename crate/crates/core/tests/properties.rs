//! Property-based invariants. Instances are drawn from seeded samplers; proptest picks the
//! seeds, dimensions and scalars.

use cohgen_core::linalg::ComplexMatrix;
use cohgen_core::sampling;
use cohgen_core::{
    capacity_numeric, capacity_qubit, coherence_derivative, commutator_m, evolve,
    holder_hamiltonian, hs_inner, hs_norm, max_surprisal_variance, rel_entropy_coherence,
    surprisal_variance, unitary_exp, validate_density, Complex64, DensityMatrix, HermitianMatrix,
    ProbabilityVector, SolverConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(m).matmul(&u.adjoint())
}

/// Diagonal unitary `diag(e^{i theta_k})`.
fn phase_unitary(thetas: &[f64]) -> ComplexMatrix {
    let d: Vec<Complex64> = thetas
        .iter()
        .map(|&t| Complex64::from_polar(1.0, t))
        .collect();
    ComplexMatrix::from_fn(d.len(), |i, j| {
        if i == j {
            d[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_exp_is_a_one_parameter_group(seed: u64, d in 1usize..6, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let h = sampling::random_hermitian(&mut rng(seed), d);
        let us = unitary_exp(&h, s).unwrap();
        let ut = unitary_exp(&h, t).unwrap();
        let ust = unitary_exp(&h, s + t).unwrap();
        prop_assert!(us.matmul(&ut).max_abs_diff(&ust) < 1e-10);
        prop_assert!(us.adjoint().matmul(&us).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        prop_assert!(unitary_exp(&h, 0.0).unwrap().max_abs_diff(&ComplexMatrix::identity(d)) < 1e-14);
    }

    #[test]
    fn hs_inner_obeys_cauchy_schwarz(seed: u64, d in 1usize..7) {
        let mut r = rng(seed);
        let a = sampling::ginibre(&mut r, d);
        let b = sampling::ginibre(&mut r, d);
        let z = hs_inner(&a, &b).unwrap();
        prop_assert!(z.norm() <= hs_norm(&a) * hs_norm(&b) * (1.0 + 1e-12));
        let aa = hs_inner(&a, &a).unwrap();
        prop_assert!((aa.re - hs_norm(&a).powi(2)).abs() <= 1e-12 * aa.re.max(1.0));
        prop_assert!(aa.im.abs() <= 1e-12 * aa.re.max(1.0));
    }

    #[test]
    fn hs_norm_is_unitarily_invariant(seed: u64, d in 1usize..7) {
        let mut r = rng(seed);
        let m = sampling::ginibre(&mut r, d);
        let u = sampling::random_unitary(&mut r, d);
        let n = hs_norm(&m);
        prop_assert!((hs_norm(&conjugate(&u, &m)) - n).abs() <= 1e-12 * n.max(1.0));
    }

    #[test]
    fn coherence_is_nonnegative_and_bounded(seed: u64, d in 1usize..7) {
        let rho = sampling::random_density(&mut rng(seed), d);
        let c = rel_entropy_coherence(&rho).unwrap();
        prop_assert!(c >= 0.0);
        prop_assert!(c <= (d as f64).log2() + 1e-12);
    }

    #[test]
    fn commutator_m_is_hermitian_and_traceless(seed: u64, d in 2usize..7) {
        let rho = sampling::random_density(&mut rng(seed), d);
        let m = commutator_m(&rho);
        prop_assert!(m.matrix().hermiticity_defect().2 == 0.0);
        prop_assert!(m.matrix().trace().norm() < 1e-14);
        for i in 0..d {
            prop_assert!(m.get(i, i).norm() == 0.0);
        }
    }

    #[test]
    fn rate_obeys_holder_and_capacity_bounds(seed: u64, d in 2usize..6, pure: bool) {
        let mut r = rng(seed);
        let h = sampling::random_unit_hamiltonian(&mut r, d);
        let rho = if pure { sampling::random_pure_state(&mut r, d).density() } else { sampling::random_density(&mut r, d) };
        let rate = coherence_derivative(&h, &rho).unwrap().analytic;
        let m_norm = hs_norm(commutator_m(&rho).matrix());
        prop_assert!(rate.abs() <= m_norm * (1.0 + 1e-12) + 1e-15);
        prop_assert!(rate <= max_surprisal_variance(d).unwrap().capacity_bound + 1e-9);
    }

    #[test]
    fn entrywise_rate_bound(seed: u64, d in 2usize..6) {
        let mut r = rng(seed);
        let h = sampling::random_hermitian(&mut r, d);
        let rho = sampling::random_density(&mut r, d);
        let rate = coherence_derivative(&h, &rho).unwrap().analytic;
        let p = rho.populations();
        let mut bound = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    bound += h.get(i, j).norm() * rho.get(i, j).norm() * (p[j].log2() - p[i].log2()).abs();
                }
            }
        }
        prop_assert!(rate.abs() <= bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn rate_is_linear_in_the_hamiltonian(seed: u64, d in 2usize..6, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let mut r = rng(seed);
        let h1 = sampling::random_hermitian(&mut r, d);
        let h2 = sampling::random_hermitian(&mut r, d);
        let rho = sampling::random_density(&mut r, d);
        let combo = HermitianMatrix::new(&h1.scale(a).into_matrix() + &h2.scale(b).into_matrix()).unwrap();
        let lhs = coherence_derivative(&combo, &rho).unwrap().analytic;
        let rhs = a * coherence_derivative(&h1, &rho).unwrap().analytic + b * coherence_derivative(&h2, &rho).unwrap().analytic;
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()));
    }

    #[test]
    fn rate_is_covariant_under_diagonal_phases(seed: u64, d in 2usize..6, thetas in proptest::collection::vec(-3.2f64..3.2, 6)) {
        let mut r = rng(seed);
        let h = sampling::random_hermitian(&mut r, d);
        let rho = sampling::random_density(&mut r, d);
        let u = phase_unitary(&thetas[..d]);
        let h_u = HermitianMatrix::new(conjugate(&u, h.matrix())).unwrap();
        let rho_u = validate_density(conjugate(&u, rho.matrix())).unwrap();
        let before = coherence_derivative(&h, &rho).unwrap().analytic;
        let after = coherence_derivative(&h_u, &rho_u).unwrap().analytic;
        prop_assert!((before - after).abs() <= 1e-11 * (1.0 + before.abs()));
    }

    #[test]
    fn surprisal_variance_stays_below_family_maximum(seed: u64, d in 2usize..7) {
        let p = sampling::random_probability(&mut rng(seed), d);
        let f = surprisal_variance(&ProbabilityVector::new(p).unwrap());
        prop_assert!(f >= 0.0);
        prop_assert!(f <= max_surprisal_variance(d).unwrap().f_max + 1e-12);
    }

    #[test]
    fn holder_hamiltonian_has_unit_norm(seed: u64, d in 2usize..6) {
        let rho = sampling::random_density(&mut rng(seed), d);
        let h = holder_hamiltonian(&rho).unwrap();
        prop_assert!((hs_norm(h.matrix()) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn evolution_composes(seed: u64, d in 2usize..5, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let mut r = rng(seed);
        let rho = sampling::random_density(&mut r, d);
        let h = sampling::random_hermitian(&mut r, d);
        let two_steps = evolve(&evolve(&rho, &h, s).unwrap(), &h, t).unwrap();
        let one_step = evolve(&rho, &h, s + t).unwrap();
        prop_assert!(two_steps.matrix().max_abs_diff(one_step.matrix()) < 1e-10);
    }

    #[test]
    fn evolution_preserves_spectrum(seed: u64, d in 2usize..5, t in -5.0f64..5.0) {
        let mut r = rng(seed);
        let rho = sampling::random_density(&mut r, d);
        let h = sampling::random_hermitian(&mut r, d);
        let before = rho.spectrum().unwrap();
        let after = evolve(&rho, &h, t).unwrap().spectrum().unwrap();
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mixed_search_never_beats_qubit_capacity(seed: u64) {
        let h = sampling::random_hermitian(&mut rng(seed), 2);
        let exact = capacity_qubit(&h).unwrap().value;
        let cfg = SolverConfig { restarts: 4, mixed: true, seed, ..SolverConfig::default() };
        let found = match capacity_numeric(&h, &cfg) {
            Ok(r) => r.value,
            Err(cohgen_core::Error::NoConvergence(r)) => r.value,
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        prop_assert!(found <= exact + 1e-6);
    }

    #[test]
    fn capacity_is_deterministic_for_a_seed(seed: u64, d in 2usize..4) {
        let h = sampling::random_unit_hamiltonian(&mut rng(seed), d);
        let cfg = SolverConfig { restarts: 3, seed, ..SolverConfig::default() };
        let a = capacity_numeric(&h, &cfg);
        let b = capacity_numeric(&h, &cfg);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
                prop_assert_eq!(a.argmax_state.matrix(), b.argmax_state.matrix());
            }
            (a, b) => prop_assert_eq!(format!("{a:?}"), format!("{b:?}")),
        }
    }

    #[test]
    fn capacity_scales_with_the_hamiltonian(seed: u64, scale in 0.1f64..10.0) {
        let h = sampling::random_hermitian(&mut rng(seed), 2);
        let base = capacity_qubit(&h).unwrap().value;
        let scaled = capacity_qubit(&h.scale(scale)).unwrap().value;
        prop_assert!((scaled - scale * base).abs() <= 1e-12 * (1.0 + scaled));
    }
}

/// Dense scan of the two-level family, independent of the golden-section search.
#[test]
fn family_maximum_matches_dense_scan() {
    for d in 2..=6 {
        let opt = max_surprisal_variance(d).unwrap();
        let mut best = 0.0f64;
        let n = 200_000;
        for k in 1..n {
            let g = k as f64 / n as f64;
            let mut p = vec![(1.0 - g) / (d - 1) as f64; d];
            p[0] = g;
            best = best.max(surprisal_variance(&ProbabilityVector::new(p).unwrap()));
        }
        assert!(
            best <= opt.f_max + 1e-13,
            "d={d}: scan {best} above {}",
            opt.f_max
        );
        assert!(
            opt.f_max - best < 1e-8,
            "d={d}: scan {best} far below {}",
            opt.f_max
        );
    }
}

#[test]
fn maximally_mixed_state_generates_nothing() {
    let mut r = rng(99);
    for d in 2..6 {
        let h = sampling::random_hermitian(&mut r, d);
        let rate = coherence_derivative(&h, &DensityMatrix::maximally_mixed(d))
            .unwrap()
            .analytic;
        assert_eq!(rate, 0.0);
    }
}
