//! Spin-j operator constructors: J_z, rotation matrices, irreducible tensor
//! operators T_LM, and the trace-orthogonal diagonal basis S_L together with
//! the expansion functions f_L(m) of the projectors |jm⟩⟨jm|.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::halfint::{check_pair, HalfInt};
use crate::matrix::ComplexMatrix;
use crate::su2::{clebsch_gordan, wigner_d, EulerAngles};

/// Diagonal of J_z: m = j, j-1, ..., -j.
pub fn jz_diagonal(j: HalfInt) -> Vec<f64> {
    j.projections().map(HalfInt::value).collect()
}

pub fn jz_matrix(j: HalfInt) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&jz_diagonal(j))
}

/// Rotation matrix u with entries u_{m1 m2} = D^j_{m1 m2}(α, β, γ).
pub fn rotation_matrix(j: HalfInt, angles: EulerAngles) -> ComplexMatrix {
    ComplexMatrix::from_fn(j.dim(), |r, c| wigner_d(j, j.projection_at(r), j.projection_at(c), angles))
}

/// Projector |jm⟩⟨jm|.
pub fn projector(j: HalfInt, m: HalfInt) -> Result<ComplexMatrix> {
    check_pair(j, m)?;
    let mut p = ComplexMatrix::zeros(j.dim());
    let i = j.index_of(m);
    p[(i, i)] = Complex64::new(1.0, 0.0);
    Ok(p)
}

/// The operator swapping |jm⟩ and |j,-m⟩.
pub fn parity_matrix(j: HalfInt) -> ComplexMatrix {
    let n = j.dim();
    ComplexMatrix::from_fn(n, |r, c| if r + c == n - 1 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

/// Polarization operator T_LM = Σ (-1)^{j-m1} ⟨j m2; j -m1 | L M⟩ |j m2⟩⟨j m1|.
pub fn tensor_operator(j: HalfInt, l: HalfInt, m: HalfInt) -> Result<ComplexMatrix> {
    if !l.is_integer() || l.twice() < 0 || l.twice() > 2 * j.twice() {
        return Err(Error::Label(format!("L = {l} must be an integer in [0, 2j] for j = {j}")));
    }
    check_pair(l, m)?;
    let n = j.dim();
    let mut t = ComplexMatrix::zeros(n);
    for (r, m2) in j.projections().enumerate() {
        for (c, m1) in j.projections().enumerate() {
            if m2 - m1 != m {
                continue;
            }
            let sign = if ((j - m1).twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let cg = clebsch_gordan(j, m2, j, -m1, l, m)?;
            t[(r, c)] = Complex64::new(sign * cg, 0.0);
        }
    }
    Ok(t)
}

/// Tr J_z^k = Σ_{m=-j}^{j} m^k by direct summation.
pub fn trace_jz_power(j: HalfInt, k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // pair ±m terms and sum from small |m| upward
    j.projections().rev().map(|m| m.value().powi(k as i32)).sum()
}

/// Tr J_z^k as an exact rational.
fn trace_jz_power_exact(j: HalfInt, k: u32) -> BigRational {
    let mut num = BigInt::zero();
    for m in j.projections() {
        num += BigInt::from(m.twice()).pow(k);
    }
    BigRational::new(num, BigInt::from(2).pow(k))
}

/// Gram matrix of the power basis used for S_L with L = 2n (even) or
/// L = 2n+1 (odd): entries Tr J_z^{2(p+q)+2·parity}, plus the right-hand
/// column Tr J_z^{L+2p+parity}.
fn gram_system(j: HalfInt, order: usize) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = order / 2;
    let parity = (order % 2) as u32;
    let base = 2 * parity; // odd L: moments start at Tr J_z^2
    let g = (0..n)
        .map(|p| (0..n).map(|q| trace_jz_power_exact(j, base + 2 * (p + q) as u32)).collect())
        .collect();
    let rhs = (0..n).map(|p| trace_jz_power_exact(j, order as u32 + parity + 2 * p as u32)).collect();
    (g, rhs)
}

/// Gaussian elimination over the rationals; `None` for a singular matrix.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(pivot, k);
        b.swap(pivot, k);
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &a[k][k];
            for c in k..n {
                let t = &f * &a[k][c];
                a[r][c] -= t;
            }
            let t = &f * &b[k];
            b[r] -= t;
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Some(x)
}

fn determinant_exact(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(pivot) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        det *= &a[k][k];
        for r in k + 1..n {
            let f = &a[r][k] / &a[k][k];
            for c in k..n {
                let t = &f * &a[k][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Determinant Δ_L of the Gram system defining S_L (1 for L = 0, 1).
pub fn gram_determinant(j: HalfInt, order: usize) -> f64 {
    to_f64(&determinant_exact(gram_system(j, order).0))
}

/// Coefficients of S_L in powers of J_z with the determinant normalization:
/// the leading coefficient is -Δ_L and the lower ones are the Cramer
/// determinants Δ_L^{(k+1)}. Entry k is the coefficient of J_z^k.
pub fn cramer_coefficients(j: HalfInt, order: usize) -> Vec<f64> {
    let (g, rhs) = gram_system(j, order);
    let n = g.len();
    let parity = order % 2;
    let mut coeffs = vec![0.0; order + 1];
    if n == 0 {
        // S_0 = I, S_1 = J_z: the empty system has Δ = 1
        coeffs[order] = 1.0;
        return coeffs;
    }
    coeffs[order] = -to_f64(&determinant_exact(g.clone()));
    for k in 0..n {
        let mut replaced = g.clone();
        for (row, b) in replaced.iter_mut().zip(&rhs) {
            row[k] = b.clone();
        }
        coeffs[2 * k + parity] = to_f64(&determinant_exact(replaced));
    }
    coeffs
}

/// Leading coefficient of S_L after rescaling: S_0 = I, S_1 = J_z,
/// S_2 = 3J_z² - j(j+1), S_3 = 5J_z³ - (3j²+3j-1)J_z, then 2L-1 onward.
fn leading_coefficient(order: usize) -> i64 {
    if order < 2 {
        1
    } else {
        2 * order as i64 - 1
    }
}

/// The trace-orthogonal diagonal basis S_0, ..., S_{2j}.
#[derive(Debug, Clone, PartialEq)]
pub struct SLBasis {
    j: HalfInt,
    ops: Vec<ComplexMatrix>,
    diagonals: Vec<Vec<f64>>,
    coeffs: Vec<Vec<f64>>,
    norms: Vec<f64>,
}

impl SLBasis {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    /// Number of basis operators, 2j+1.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op(&self, order: usize) -> &ComplexMatrix {
        &self.ops[order]
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// Diagonal entries of S_L, ordered m = j, ..., -j.
    pub fn diagonal(&self, order: usize) -> &[f64] {
        &self.diagonals[order]
    }

    /// Coefficient of J_z^k in S_L, for k = 0..=L.
    pub fn coefficients(&self, order: usize) -> &[f64] {
        &self.coeffs[order]
    }

    /// Tr(S_L²).
    pub fn norm(&self, order: usize) -> f64 {
        self.norms[order]
    }

    /// A copy with every S_L multiplied by `scales[L]`.
    pub fn rescaled(&self, scales: &[f64]) -> SLBasis {
        assert_eq!(scales.len(), self.len());
        let scale = |rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
            rows.iter().zip(scales).map(|(r, &s)| r.iter().map(|x| x * s).collect()).collect()
        };
        assemble(self.j, scale(&self.coeffs), scale(&self.diagonals))
    }

    /// Σ_L weights[L] · f_L(m) · S_L, returned as a diagonal.
    pub fn weighted_expansion(&self, m: HalfInt, weights: impl Fn(usize) -> f64) -> Vec<f64> {
        let mut diag = vec![0.0; self.j.dim()];
        for order in 0..self.len() {
            let w = weights(order) * f_function(self, order, m);
            for (d, &s) in diag.iter_mut().zip(&self.diagonals[order]) {
                *d += w * s;
            }
        }
        diag
    }
}

fn eval_polynomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn assemble(j: HalfInt, coeffs: Vec<Vec<f64>>, diagonals: Vec<Vec<f64>>) -> SLBasis {
    let norms = diagonals.iter().map(|d| d.iter().map(|x| x * x).sum()).collect();
    let ops = diagonals.iter().map(|d| ComplexMatrix::from_real_diagonal(d)).collect();
    SLBasis { j, ops, diagonals, coeffs, norms }
}

/// Build S_0 ... S_{2j} by solving the trace-orthogonality systems.
///
/// The moments Tr J_z^k are rational, so the systems are solved exactly and
/// both the coefficients and the diagonal entries are rounded only once.
pub fn sl_basis(j: HalfInt) -> Result<SLBasis> {
    if j.twice() < 0 {
        return Err(Error::Label(format!("negative spin {j}")));
    }
    let max_order = j.twice() as usize;
    let mut coeffs = Vec::with_capacity(max_order + 1);
    let mut diagonals = Vec::with_capacity(max_order + 1);
    for order in 0..=max_order {
        let (g, rhs) = gram_system(j, order);
        let parity = order % 2;
        let lead = BigRational::from_integer(BigInt::from(leading_coefficient(order)));
        let mut c = vec![BigRational::zero(); order + 1];
        if !g.is_empty() {
            let neg_rhs: Vec<BigRational> = rhs.iter().map(|b| -(&lead * b)).collect();
            let x = solve_exact(g, neg_rhs).ok_or(Error::Singular { order })?;
            for (k, xk) in x.into_iter().enumerate() {
                c[2 * k + parity] = xk;
            }
        }
        c[order] = lead;
        let diag = j
            .projections()
            .map(|m| {
                let x = BigRational::new(BigInt::from(m.twice()), BigInt::from(2));
                let v = c.iter().rev().fold(BigRational::zero(), |acc, ck| acc * &x + ck);
                to_f64(&v)
            })
            .collect();
        coeffs.push(c.iter().map(to_f64).collect());
        diagonals.push(diag);
    }
    Ok(assemble(j, coeffs, diagonals))
}

/// f_L(m) = [Tr S_L²]^{-1} Σ_k c_k m^k, the coefficient of S_L in |jm⟩⟨jm|.
pub fn f_function(basis: &SLBasis, order: usize, m: HalfInt) -> f64 {
    eval_polynomial(&basis.coeffs[order], m.value()) / basis.norms[order]
}

/// f_L(m) through Clebsch–Gordan coefficients:
/// [Tr S_L²]^{-1/2} (-1)^{j-m} ⟨jm; j-m | L0⟩.
pub fn f_function_cg(basis: &SLBasis, order: usize, m: HalfInt) -> Result<f64> {
    let j = basis.j;
    check_pair(j, m)?;
    let sign = if ((j - m).twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let cg = clebsch_gordan(j, m, j, -m, HalfInt::integer(order as i32), HalfInt::ZERO)?;
    Ok(sign * cg / basis.norms[order].sqrt())
}

/// One step of the three-term recurrence in L: f_L(m) from f_{L-1}(m) and
/// f_{L-2}(m). Valid for 2 <= L <= 2j.
pub fn f_recurrence_step(basis: &SLBasis, order: usize, m: HalfInt, f_prev: f64, f_prev2: f64) -> f64 {
    assert!(order >= 2, "recurrence starts at L = 2");
    let l = order as f64;
    let tj = f64::from(basis.j.twice());
    let n = |k: usize| basis.norms[k];
    let pre = (4.0 * (2.0 * l - 1.0) * (2.0 * l + 1.0)
        / (l * l * (tj - l + 1.0) * (tj + l + 1.0) * n(order)))
        .sqrt();
    let back = ((l - 1.0).powi(2) * (tj - l + 2.0) * (tj + l) * n(order - 2)
        / (4.0 * (2.0 * l - 3.0) * (2.0 * l - 1.0)))
        .sqrt();
    pre * (n(order - 1).sqrt() * m.value() * f_prev - back * f_prev2)
}
