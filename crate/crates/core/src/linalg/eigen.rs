//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair `(p, q)` with the unitary
//!
//! ```text
//! J = [[ c,            s e^{i phi} ],
//!      [ -s e^{-i phi}, c          ]]      where a_pq = |a_pq| e^{i phi}
//! ```
//!
//! and `(c, s)` is the real symmetric Jacobi rotation for `[[a_pp, |a_pq|], [|a_pq|, a_qq]]`.
//! Jacobi is slow for large matrices but accurate to a few ulps on the small ones used here.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is linked
use num_traits::Float;

use super::{ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `h = V diag(values) V^dagger`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// `V diag(f(lambda_k)) V^dagger`
    pub fn map(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let d = self.values.len();
        let fv: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        ComplexMatrix::from_fn(d, |i, j| {
            (0..d)
                .map(|k| v.get(i, k) * fv[k] * v.get(j, k).conj())
                .sum()
        })
    }

    /// `exp(-i t H)` from the stored decomposition.
    pub fn unitary(&self, t: f64) -> ComplexMatrix {
        self.map(|l| Complex64::new(0.0, -l * t).exp())
    }
}

fn off_norm_sqr(a: &ComplexMatrix) -> f64 {
    let d = a.dim();
    let mut s = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Eigen> {
    let mut a = h.matrix().clone();
    let d = a.dim();
    let mut v = ComplexMatrix::identity(d);

    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let eps = f64::EPSILON;
    let mut sweeps = 0;
    loop {
        let off = off_norm_sqr(&a);
        if off <= (eps * eps) * total || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                sweeps,
                off_norm: off.sqrt(),
            });
        }
        sweeps += 1;
        for p in 0..d {
            for q in (p + 1)..d {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(d, |i, k| v.get(i, order[k]));
    Ok(Eigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // skip rotations that cannot change the diagonal in floating point
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a.set(p, q, Complex64::new(0.0, 0.0));
        a.set(q, p, Complex64::new(0.0, 0.0));
        return;
    }
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_e = phase * s; // s e^{i phi}
    let s_ec = s_e.conj(); // s e^{-i phi}
    let d = a.dim();

    // A <- A J
    for k in 0..d {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * s_ec);
        a.set(k, q, akp * s_e + akq * c);
    }
    // A <- J^dagger A
    for k in 0..d {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * s_e);
        a.set(q, k, apk * s_ec + aqk * c);
    }
    a.set(p, p, Complex64::new(app - t * mag, 0.0));
    a.set(q, q, Complex64::new(aqq + t * mag, 0.0));
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    // V <- V J
    for k in 0..d {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * s_ec);
        v.set(k, q, vkp * s_e + vkq * c);
    }
}
