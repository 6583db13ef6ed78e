//! Dense complex matrices and the validated state/operator types built on them.
//!
//! Matrices here are small (the regime of interest is `d <= 64`), so everything is a
//! row-major `Vec<Complex64>` with no sparsity or blocking.

mod eigen;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent f64 methods whenever std is linked
use num_traits::Float;

use crate::{Error, Result, VALIDATION_TOL};

pub use eigen::{eig_hermitian, Eigen};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix with finite entries, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::BadLength {
                dim,
                len: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from separate real and imaginary row arrays.
    pub fn from_re_im(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if im.len() != dim {
            return Err(Error::DimensionMismatch(dim, im.len()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (row, (r, i)) in re.iter().zip(im).enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: r.len(),
                    row,
                });
            }
            if i.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: i.len(),
                    row,
                });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)));
        }
        Self::new(dim, data)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.dim + j] = z;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn real_parts(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|z| z.re).collect())
            .collect()
    }

    pub fn imag_parts(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim)
            .map(|r| r.iter().map(|z| z.im).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * d..(k + 1) * d];
                for (o, b) in out[i * d..(i + 1) * d].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: d, data: out }
    }

    /// `[a, b] = ab - ba`
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &a.matmul(b) - &b.matmul(a)
    }

    /// Largest `|m_ij - conj(m_ji)|` together with its position.
    pub fn hermiticity_defect(&self) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for i in 0..self.dim {
            for j in i..self.dim {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                if dev > worst.2 {
                    worst = (i, j, dev);
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Hermitian matrix. Entries are exactly Hermitian: inputs within tolerance are replaced
/// by `(m + m^dagger) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let (row, col, deviation) = m.hermiticity_defect();
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian {
                row,
                col,
                deviation,
            });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without checking. For matrices that are Hermitian by construction.
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let d = m.dim;
        let h = ComplexMatrix::from_fn(d, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
        Self(h)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self(ComplexMatrix::from_real_diagonal(diag))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn real_diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0.get(i, i).re).collect()
    }

    /// Multiplies by a real scalar; the result stays Hermitian.
    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(Complex64::new(c, 0.0)))
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    pub(crate) fn from_hermitian_unchecked(h: HermitianMatrix) -> Self {
        Self(h)
    }

    /// `A A^dagger / Tr(A A^dagger)`. Positive by construction, so no eigen check.
    pub fn from_factor(a: &ComplexMatrix) -> Result<Self> {
        let aa = a.matmul(&a.adjoint());
        let tr = aa.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::NotPsd {
                what: "factor has zero norm",
                violation: tr,
            });
        }
        Ok(Self(HermitianMatrix::symmetrized(
            aa.scale(Complex64::new(1.0 / tr, 0.0)),
        )))
    }

    /// Diagonal (incoherent) state. Entries must form a probability vector.
    pub fn diagonal_state(p: &[f64]) -> Result<Self> {
        validate_density(ComplexMatrix::from_real_diagonal(p))
    }

    /// `I / d`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(HermitianMatrix::from_real_diagonal(&vec![
            1.0 / dim as f64;
            dim
        ]))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.0.matrix()
    }

    /// Populations `rho_ii`.
    pub fn populations(&self) -> Vec<f64> {
        self.0.real_diagonal()
    }

    pub fn min_population(&self) -> f64 {
        self.populations().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Eigenvalues with values in `[-tol, 0]` clamped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let eig = eig_hermitian(&self.0)?;
        Ok(eig.values.into_iter().map(|l| l.max(0.0)).collect())
    }
}

/// Validates that `m` is a density matrix, without renormalizing.
///
/// Checks Hermiticity, unit trace, the entrywise bound `rho_ii rho_jj >= |rho_ij|^2` and
/// the smallest eigenvalue, all at [`VALIDATION_TOL`].
pub fn validate_density(m: ComplexMatrix) -> Result<DensityMatrix> {
    let h = HermitianMatrix::new(m)?;
    let d = h.dim();
    let trace = h.matrix().trace().re;
    let deviation = (trace - 1.0).abs();
    if deviation > VALIDATION_TOL {
        return Err(Error::NotUnitTrace { trace, deviation });
    }
    let pops = h.real_diagonal();
    let mut worst_cs = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            worst_cs = worst_cs.max(h.get(i, j).norm_sqr() - pops[i] * pops[j]);
        }
    }
    if worst_cs > VALIDATION_TOL {
        return Err(Error::NotPsd {
            what: "|rho_ij|^2 - rho_ii rho_jj",
            violation: worst_cs,
        });
    }
    let eig = eig_hermitian(&h)?;
    let min = eig.values[0];
    if min < -VALIDATION_TOL {
        return Err(Error::NotPsd {
            what: "smallest eigenvalue",
            violation: min,
        });
    }
    Ok(DensityMatrix(h))
}

/// Normalized pure state `|psi>`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized {
                norm_sqr: norm * norm,
            });
        }
        amplitudes.iter_mut().for_each(|z| *z /= norm);
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|psi><psi|`
    pub fn density(&self) -> DensityMatrix {
        let psi = &self.amplitudes;
        let m = ComplexMatrix::from_fn(psi.len(), |i, j| psi[i] * psi[j].conj());
        DensityMatrix(HermitianMatrix::symmetrized(m))
    }
}

/// `exp(-i t H) = V diag(exp(-i lambda_k t)) V^dagger`
pub fn unitary_exp(h: &HermitianMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(h)?.unitary(t))
}

/// Hilbert-Schmidt norm `sqrt(Tr(M^dagger M))`.
pub fn hs_norm(m: &ComplexMatrix) -> f64 {
    // scaled sum of squares to stay clear of overflow on large entries
    let scale = m
        .data
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = m.data.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * sum.sqrt()
}

/// Hilbert-Schmidt inner product `Tr(a^dagger b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}
