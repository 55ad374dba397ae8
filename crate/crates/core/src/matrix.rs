//! Small dense complex square matrices.
//!
//! Rows and columns of a spin-j operator are indexed by m = j, j-1, ..., -j,
//! so index 0 corresponds to m = j.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Build from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let dim = re.len();
        if dim == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        if im.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: im.len() });
        }
        for row in re.iter().chain(im) {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
        }
        Ok(Self::from_fn(dim, |r, c| Complex64::new(re[r][c], im[r][c])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn multiply(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Result<Complex64> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for c in 0..n {
                acc += self.data[r * n + c] * other.data[c * n + r];
            }
        }
        Ok(acc)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|&a| a * s).collect() }
    }

    /// self += s · other
    pub fn add_scaled(&mut self, s: Complex64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest entrywise deviation from Hermiticity, max |A_rc - conj(A_cr)|.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// u† · self · u
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_dim(u)?;
        Ok(u.adjoint().mul_unchecked(&self.mul_unchecked(u)))
    }

    /// u† · diag(d) · u for a real diagonal d.
    pub fn sandwich_diagonal(u: &ComplexMatrix, diag: &[f64]) -> ComplexMatrix {
        let n = u.dim;
        assert_eq!(diag.len(), n, "diagonal length mismatch");
        let mut out = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &d) in diag.iter().enumerate() {
                    if d != 0.0 {
                        acc += u.data[k * n + r].conj() * d * u.data[k * n + c];
                    }
                }
                out.data[r * n + c] = acc;
            }
        }
        out
    }

    /// Matrix exponential by scaling and squaring of a Taylor series.
    pub fn expm(&self) -> ComplexMatrix {
        let n = self.dim;
        let norm = self.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = self.scale_real(0.5f64.powi(squarings as i32));
        let mut sum = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..=24 {
            term = term.mul_unchecked(&a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
            if term.frobenius_norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul_unchecked(&sum);
        }
        sum
    }

    /// Real eigenvalues of a Hermitian matrix in descending order.
    ///
    /// The n×n complex Hermitian problem is embedded into the 2n×2n real
    /// symmetric matrix [[Re, -Im], [Im, Re]], whose spectrum is that of
    /// the original with every eigenvalue doubled, and solved with cyclic
    /// Jacobi rotations.
    pub fn eigvals_hermitian(&self) -> Result<Vec<f64>> {
        let scale = self.frobenius_norm().max(1.0);
        let dev = self.hermitian_deviation();
        if dev > 1e-10 * scale {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let n = self.dim;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for r in 0..n {
            for c in 0..n {
                // symmetrize to drop the tolerated anti-Hermitian residue
                let z = 0.5 * (self[(r, c)] + self[(c, r)].conj());
                a[r * m + c] = z.re;
                a[(r + n) * m + (c + n)] = z.re;
                a[(r + n) * m + c] = z.im;
                a[r * m + (c + n)] = -z.im;
            }
        }
        let mut vals = jacobi_symmetric(&mut a, m);
        vals.sort_by(|x, y| y.partial_cmp(x).unwrap());
        Ok(vals.into_iter().step_by(2).collect())
    }

    fn check_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// Eigenvalues of a real symmetric matrix (row-major, overwritten).
fn jacobi_symmetric(a: &mut [f64], n: usize) -> Vec<f64> {
    const MAX_SWEEPS: usize = 100;
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Panics on dimension mismatch; use [`ComplexMatrix::multiply`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs).expect("dimension mismatch in matrix sum")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs).expect("dimension mismatch in matrix difference")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..self.dim).map(|r| (0..self.dim).map(|c| f(&self[(r, c)])).collect()).collect()
        };
        MatrixWire { dim: self.dim, re: rows(|z| z.re), im: rows(|z| z.im) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let m = ComplexMatrix::from_parts(&wire.re, &wire.im).map_err(serde::de::Error::custom)?;
        if m.dim != wire.dim {
            return Err(serde::de::Error::custom(format!(
                "declared dim {} but arrays are {}x{}",
                wire.dim, m.dim, m.dim
            )));
        }
        Ok(m)
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;
    pub const EIGEN_TOL: f64 = 1e-10;

    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let report = StateDiagnostics::of(&mat)?;
        report.check()?;
        Ok(DensityMatrix { mat })
    }

    /// The maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let mat = ComplexMatrix::deserialize(deserializer)?;
        DensityMatrix::new(mat).map_err(serde::de::Error::custom)
    }
}

/// Measured deviations of a matrix from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub hermitian_deviation: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn of(mat: &ComplexMatrix) -> Result<Self> {
        let hermitian_deviation = mat.hermitian_deviation();
        if hermitian_deviation > DensityMatrix::HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {hermitian_deviation:e})"
            )));
        }
        let trace_error = (mat.trace() - Complex64::new(1.0, 0.0)).norm();
        let min_eigenvalue = mat.eigvals_hermitian()?.last().copied().unwrap_or(0.0);
        Ok(StateDiagnostics { hermitian_deviation, trace_error, min_eigenvalue })
    }

    pub fn check(&self) -> Result<()> {
        if self.trace_error > DensityMatrix::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace differs from 1 by {:e}", self.trace_error)));
        }
        if self.min_eigenvalue < -DensityMatrix::EIGEN_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {:e}", self.min_eigenvalue)));
        }
        Ok(())
    }
}
