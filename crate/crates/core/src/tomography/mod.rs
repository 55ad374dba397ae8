//! Dequantizer and quantizer operators, tomograms and reconstruction.
//!
//! A tomographic point x = (m, α, β, γ) labels the rotated projector
//! U(x) = u†|jm⟩⟨jm|u. The quantizer D(x) is the dual family satisfying
//! ∫ Tr(A U(x)) D(x) dx = A.

mod grid;
mod pure;

pub use grid::{
    gauss_legendre, integrate_operator, make_grid, read_tomogram_csv, reconstruct, reconstruct_operator,
    sample_tomogram, write_tomogram_csv, Family, QuadratureGrid, Tomogram,
};
pub use pure::{asymptotic_tomogram, pure_state_tomogram};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::{check_pair, HalfInt};
use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::spin_ops::{jz_matrix, rotation_matrix, SLBasis};
use crate::su2::EulerAngles;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographyPoint {
    pub m: HalfInt,
    pub angles: EulerAngles,
}

impl TomographyPoint {
    pub fn new(m: HalfInt, angles: EulerAngles) -> Self {
        TomographyPoint { m, angles }
    }

    /// Validate the projection against the ambient spin.
    pub fn check(&self, j: HalfInt) -> Result<()> {
        check_pair(j, self.m)
    }
}

fn check_basis(j: HalfInt, basis: &SLBasis) -> Result<()> {
    if basis.j() != j {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: basis.j().dim() });
    }
    Ok(())
}

/// U(x) = Σ_L f_L(m) u† S_L u.
pub fn dequantizer(j: HalfInt, x: &TomographyPoint, basis: &SLBasis) -> Result<ComplexMatrix> {
    x.check(j)?;
    check_basis(j, basis)?;
    let diag = basis.weighted_expansion(x.m, |_| 1.0);
    Ok(ComplexMatrix::sandwich_diagonal(&rotation_matrix(j, x.angles), &diag))
}

/// D(x) = Σ_L (2L+1) f_L(m) u† S_L u.
pub fn quantizer(j: HalfInt, x: &TomographyPoint, basis: &SLBasis) -> Result<ComplexMatrix> {
    x.check(j)?;
    check_basis(j, basis)?;
    let diag = basis.weighted_expansion(x.m, |l| (2 * l + 1) as f64);
    Ok(ComplexMatrix::sandwich_diagonal(&rotation_matrix(j, x.angles), &diag))
}

/// Σ_k weight(φ_k) e^{imφ_k} exp(-i u†J_z u φ_k) over φ_k = 2πk/n.
///
/// The rotated J_z is exponentiated as a full matrix, so this path shares
/// nothing with the S_L expansion beyond the rotation matrix.
fn phase_average(j: HalfInt, x: &TomographyPoint, n: usize, weight: impl Fn(f64) -> f64) -> ComplexMatrix {
    let dim = j.dim();
    let a = jz_matrix(j).conjugate_by(&rotation_matrix(j, x.angles)).expect("matching dimensions");
    let step = TAU / n as f64;
    let e1 = a.scale(Complex64::new(0.0, -step)).expm();
    let mut power = ComplexMatrix::identity(dim);
    let mut acc = ComplexMatrix::zeros(dim);
    for k in 0..n {
        let phi = step * k as f64;
        let c = Complex64::from_polar(weight(phi), x.m.value() * phi);
        acc.add_scaled(c, &power);
        power = &power * &e1;
    }
    acc
}

/// U(x) = (1/2π) ∫ exp[i(m - u†J_z u)φ] dφ as an exact uniform sum.
pub fn dequantizer_exponential(j: HalfInt, x: &TomographyPoint) -> Result<ComplexMatrix> {
    x.check(j)?;
    // the integrand has frequencies |m - m'| <= 2j
    let n = 2 * j.twice() as usize + 3;
    Ok(phase_average(j, x, n, |_| 1.0).scale_real(1.0 / n as f64))
}

/// D(x) = ((2j+1)/π) ∫ sin²(φ/2) exp[i(m - u†J_z u)φ] dφ as an exact uniform sum.
///
/// This family is a valid quantizer for every j but coincides with
/// [`quantizer`] only for j = 1/2; for larger spins the two differ by terms
/// orthogonal to every dequantizer.
pub fn quantizer_exponential(j: HalfInt, x: &TomographyPoint) -> Result<ComplexMatrix> {
    x.check(j)?;
    let n = 2 * j.twice() as usize + 5;
    let s = phase_average(j, x, n, |phi| (0.5 * phi).sin().powi(2));
    Ok(s.scale_real(f64::from(j.twice() + 1) * 2.0 / n as f64))
}

/// The shift matrices R₊ (ones on the superdiagonal) and R₋ = R₊†.
pub fn shift_matrices(j: HalfInt) -> (ComplexMatrix, ComplexMatrix) {
    let n = j.dim();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let plus = ComplexMatrix::from_fn(n, |r, c| if c == r + 1 { one } else { zero });
    let minus = plus.adjoint();
    (plus, minus)
}

/// R₊(u) = u†R₊u and R₋(u) = u†R₋u.
fn rotated_shifts(j: HalfInt, angles: EulerAngles) -> (ComplexMatrix, ComplexMatrix) {
    let u = rotation_matrix(j, angles);
    let (p, m) = shift_matrices(j);
    (p.conjugate_by(&u).expect("same dimension"), m.conjugate_by(&u).expect("same dimension"))
}

/// ½[R₊(u) X R₋(u) + R₋(u) X R₊(u)]
fn shift_average(x: &ComplexMatrix, rp: &ComplexMatrix, rm: &ComplexMatrix) -> ComplexMatrix {
    let a = &(rp * x) * rm;
    let b = &(rm * x) * rp;
    (&a + &b).scale_real(0.5)
}

/// D = (2j+1)[U - ½R₊(u)UR₋(u) - ½R₋(u)UR₊(u)], with U the rotated
/// projector built directly from the rotation matrix.
pub fn quantizer_from_dequantizer(j: HalfInt, x: &TomographyPoint) -> Result<ComplexMatrix> {
    x.check(j)?;
    let u = rotation_matrix(j, x.angles);
    let mut proj = vec![0.0; j.dim()];
    proj[j.index_of(x.m)] = 1.0;
    let big_u = ComplexMatrix::sandwich_diagonal(&u, &proj);
    let (rp, rm) = rotated_shifts(j, x.angles);
    let d = &big_u - &shift_average(&big_u, &rp, &rm);
    Ok(d.scale_real(f64::from(j.twice() + 1)))
}

/// Default iteration cap for [`dequantizer_from_quantizer`].
pub fn inverse_series_cap(j: HalfInt) -> usize {
    50 * j.dim() * j.dim()
}

/// U = (2j+1)^{-1} Σ_k D^{(k)} with D^{(0)} = D and
/// D^{(k)} = ½[R₊(u)D^{(k-1)}R₋(u) + R₋(u)D^{(k-1)}R₊(u)].
///
/// D is the shift-form quantizer of [`quantizer_from_dequantizer`]. Terms
/// are accumulated until the Frobenius norm of D^{(k)} drops below `tol`.
pub fn dequantizer_from_quantizer(j: HalfInt, x: &TomographyPoint, tol: f64) -> Result<ComplexMatrix> {
    dequantizer_from_quantizer_capped(j, x, tol, inverse_series_cap(j))
}

pub fn dequantizer_from_quantizer_capped(
    j: HalfInt,
    x: &TomographyPoint,
    tol: f64,
    cap: usize,
) -> Result<ComplexMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Unsupported(format!("series tolerance must be positive, got {tol}")));
    }
    let (rp, rm) = rotated_shifts(j, x.angles);
    let mut term = quantizer_from_dequantizer(j, x)?;
    let mut sum = term.clone();
    let mut residual = term.frobenius_norm();
    let mut k = 0;
    while residual >= tol {
        if k >= cap {
            return Err(Error::Convergence { iterations: k, residual });
        }
        term = shift_average(&term, &rp, &rm);
        sum = &sum + &term;
        residual = term.frobenius_norm();
        k += 1;
    }
    Ok(sum.scale_real(1.0 / f64::from(j.twice() + 1)))
}

/// Row m of the rotation matrix: U(x) = v†v for this row vector v.
fn projector_row(u: &ComplexMatrix, j: HalfInt, m: HalfInt) -> Vec<Complex64> {
    let r = j.index_of(m);
    (0..j.dim()).map(|c| u[(r, c)]).collect()
}

/// ⟨jm|u ρ u†|jm⟩ for a precomputed rotation matrix.
pub(crate) fn tomogram_value_with(rho: &ComplexMatrix, u: &ComplexMatrix, j: HalfInt, m: HalfInt) -> f64 {
    let v = projector_row(u, j, m);
    let n = v.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for c in 0..n {
            row += rho[(r, c)] * v[c].conj();
        }
        acc += v[r] * row;
    }
    debug_assert!(acc.im.abs() < 1e-12 * rho.frobenius_norm().max(1.0));
    acc.re
}

/// w(x) = Tr(ρ U(x)).
pub fn tomogram_value(rho: &DensityMatrix, j: HalfInt, x: &TomographyPoint) -> Result<f64> {
    if rho.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: rho.dim() });
    }
    x.check(j)?;
    let u = rotation_matrix(j, x.angles);
    Ok(tomogram_value_with(rho.matrix(), &u, j, x.m))
}

/// Dequantizer and quantizer diagonals Σ_L c_L f_L(m) S_L, cached per m so
/// that grid sweeps only pay for the rotation.
#[derive(Debug, Clone)]
pub struct OperatorTable {
    j: HalfInt,
    dequantizer: Vec<Vec<f64>>,
    quantizer: Vec<Vec<f64>>,
}

impl OperatorTable {
    pub fn new(basis: &SLBasis) -> Self {
        let j = basis.j();
        let dequantizer = j.projections().map(|m| basis.weighted_expansion(m, |_| 1.0)).collect();
        let quantizer = j.projections().map(|m| basis.weighted_expansion(m, |l| (2 * l + 1) as f64)).collect();
        OperatorTable { j, dequantizer, quantizer }
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn dequantizer(&self, u: &ComplexMatrix, m: HalfInt) -> ComplexMatrix {
        ComplexMatrix::sandwich_diagonal(u, &self.dequantizer[self.j.index_of(m)])
    }

    pub fn quantizer(&self, u: &ComplexMatrix, m: HalfInt) -> ComplexMatrix {
        ComplexMatrix::sandwich_diagonal(u, &self.quantizer[self.j.index_of(m)])
    }

    /// Quantizer scaled by `factor`; used to probe the sensitivity of checks.
    pub fn with_quantizer_scale(mut self, factor: f64) -> Self {
        for d in &mut self.quantizer {
            d.iter_mut().for_each(|v| *v *= factor);
        }
        self
    }
}

/// Spin j with its S_L basis and operator table, built once and shared.
#[derive(Debug, Clone)]
pub struct SpinContext {
    j: HalfInt,
    basis: SLBasis,
    table: OperatorTable,
}

impl SpinContext {
    pub fn new(j: HalfInt) -> Result<Self> {
        let basis = crate::spin_ops::sl_basis(j)?;
        let table = OperatorTable::new(&basis);
        Ok(SpinContext { j, basis, table })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn basis(&self) -> &SLBasis {
        &self.basis
    }

    pub fn table(&self) -> &OperatorTable {
        &self.table
    }

    /// Replace the operator table, e.g. with a deliberately perturbed one.
    pub fn with_table(mut self, table: OperatorTable) -> Self {
        self.table = table;
        self
    }

    pub fn dequantizer(&self, x: &TomographyPoint) -> Result<ComplexMatrix> {
        x.check(self.j)?;
        Ok(self.table.dequantizer(&rotation_matrix(self.j, x.angles), x.m))
    }

    pub fn quantizer(&self, x: &TomographyPoint) -> Result<ComplexMatrix> {
        x.check(self.j)?;
        Ok(self.table.quantizer(&rotation_matrix(self.j, x.angles), x.m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_point, seeded};
    use crate::spin_ops::{projector, sl_basis};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(tm: i32, a: f64, b: f64, g: f64) -> TomographyPoint {
        TomographyPoint::new(h(tm), EulerAngles::new(a, b, g).unwrap())
    }

    #[test]
    fn qubit_dequantizer_matches_printed_matrix() {
        let j = h(1);
        let basis = sl_basis(j).unwrap();
        let mut rng = seeded(3);
        for _ in 0..20 {
            let x = random_point(&mut rng, j);
            let (m, a, b) = (x.m.value(), x.angles.alpha, x.angles.beta);
            let expected = ComplexMatrix::from_fn(2, |r, col| {
                let base = if r == col { 0.5 } else { 0.0 };
                let v = match (r, col) {
                    (0, 0) => c(b.cos(), 0.0),
                    (1, 1) => c(-b.cos(), 0.0),
                    (0, 1) => -Complex64::from_polar(b.sin(), a),
                    _ => -Complex64::from_polar(b.sin(), -a),
                };
                c(base, 0.0) + v * m
            });
            let u = dequantizer(j, &x, &basis).unwrap();
            assert!(u.max_abs_diff(&expected).unwrap() < 1e-14);
        }
    }

    #[test]
    fn qutrit_dequantizer_corner_entry() {
        let j = h(2);
        let basis = sl_basis(j).unwrap();
        for tm in [2, 0, -2] {
            for &b in &[0.0, 0.4, 1.3, 2.9] {
                let x = pt(tm, 0.7, b, 1.1);
                let m = x.m.value();
                let expected = 1.0 / 3.0
                    + 0.5 * m * b.cos()
                    + (3.0 * m * m - 2.0) / 6.0 * (3.0 * b.cos().powi(2) - 1.0) / 2.0;
                let u = dequantizer(j, &x, &basis).unwrap();
                assert!((u[(0, 0)] - c(expected, 0.0)).norm() < 1e-14, "m={m} b={b}");
            }
        }
    }

    #[test]
    fn identity_rotation_gives_projectors() {
        for tj in 0..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            for m in j.projections() {
                let x = TomographyPoint::new(m, EulerAngles::IDENTITY);
                let p = projector(j, m).unwrap();
                assert!(dequantizer(j, &x, &basis).unwrap().max_abs_diff(&p).unwrap() < 1e-12);
                assert!(dequantizer_exponential(j, &x).unwrap().max_abs_diff(&p).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn dequantizer_is_rank_one_projector() {
        let mut rng = seeded(5);
        for tj in 1..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            for _ in 0..10 {
                let x = random_point(&mut rng, j);
                let u = dequantizer(j, &x, &basis).unwrap();
                assert!(u.hermitian_deviation() < 1e-13);
                assert!((u.trace() - c(1.0, 0.0)).norm() < 1e-12);
                assert!((&u * &u).max_abs_diff(&u).unwrap() < 1e-12);
                let ev = u.eigvals_hermitian().unwrap();
                assert!((ev[0] - 1.0).abs() < 1e-10 && ev[1..].iter().all(|v| v.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn dequantizer_completeness() {
        let mut rng = seeded(8);
        for tj in 1..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            let angles = crate::random::random_angles(&mut rng);
            let mut sum = ComplexMatrix::zeros(j.dim());
            for m in j.projections() {
                sum = &sum + &dequantizer(j, &TomographyPoint::new(m, angles), &basis).unwrap();
            }
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(j.dim())).unwrap() < 1e-12);
        }
    }

    #[test]
    fn dequantizer_forms_agree() {
        let mut rng = seeded(13);
        for tj in 1..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            for _ in 0..25 {
                let x = random_point(&mut rng, j);
                let a = dequantizer(j, &x, &basis).unwrap();
                let b = dequantizer_exponential(j, &x).unwrap();
                assert!(a.max_abs_diff(&b).unwrap() < 1e-12, "j={j}");
            }
        }
    }

    #[test]
    fn qubit_quantizer_at_identity() {
        let j = h(1);
        let basis = sl_basis(j).unwrap();
        let x = pt(1, 0.0, 0.0, 0.0);
        let expected = ComplexMatrix::from_real_diagonal(&[2.0, -1.0]);
        for d in [
            quantizer(j, &x, &basis).unwrap(),
            quantizer_exponential(j, &x).unwrap(),
            quantizer_from_dequantizer(j, &x).unwrap(),
        ] {
            assert!(d.max_abs_diff(&expected).unwrap() < 1e-13);
        }
    }

    #[test]
    fn qutrit_quantizer_scales_dequantizer_terms() {
        let j = h(2);
        let basis = sl_basis(j).unwrap();
        let x = pt(0, 0.3, 1.1, 0.2);
        let u = rotation_matrix(j, x.angles);
        let mut expected = ComplexMatrix::zeros(3);
        for (l, w) in [1.0, 3.0, 5.0].into_iter().enumerate() {
            let f = crate::spin_ops::f_function(&basis, l, x.m);
            expected.add_scaled(c(w * f, 0.0), &basis.op(l).conjugate_by(&u).unwrap());
        }
        assert!(quantizer(j, &x, &basis).unwrap().max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn quantizer_trace_and_hermiticity() {
        let mut rng = seeded(17);
        for tj in 1..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            let angles = crate::random::random_angles(&mut rng);
            let mut exp_trace = 0.0;
            for m in j.projections() {
                let x = TomographyPoint::new(m, angles);
                let d = quantizer(j, &x, &basis).unwrap();
                assert!((d.trace() - c(1.0, 0.0)).norm() < 1e-12);
                assert!(d.hermitian_deviation() < 1e-12);
                let e = quantizer_exponential(j, &x).unwrap();
                assert!(e.hermitian_deviation() < 1e-12);
                exp_trace += e.trace().re;
            }
            // the shift form only has unit trace on average over m
            assert!((exp_trace - j.dim() as f64).abs() < 1e-11);
        }
    }

    #[test]
    fn exponential_quantizer_equals_shift_form() {
        let mut rng = seeded(19);
        for tj in 1..=6 {
            let j = h(tj);
            for _ in 0..20 {
                let x = random_point(&mut rng, j);
                let a = quantizer_exponential(j, &x).unwrap();
                let b = quantizer_from_dequantizer(j, &x).unwrap();
                assert!(a.max_abs_diff(&b).unwrap() < 1e-12, "j={j}");
            }
        }
    }

    /// The shift-form and tensor-form quantizers differ pointwise beyond
    /// spin 1/2, but Σ_m f_L(m) Tr(gap(m) u†S_L u) vanishes for every L, so
    /// the gap is invisible to reconstruction.
    #[test]
    fn quantizer_forms_differ_by_invisible_terms() {
        let mut rng = seeded(23);
        for tj in 1..=6 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            let angles = crate::random::random_angles(&mut rng);
            let u = rotation_matrix(j, angles);
            let gaps: Vec<ComplexMatrix> = j
                .projections()
                .map(|m| {
                    let x = TomographyPoint::new(m, angles);
                    &quantizer(j, &x, &basis).unwrap() - &quantizer_exponential(j, &x).unwrap()
                })
                .collect();
            for l in 0..basis.len() {
                let s = basis.op(l).conjugate_by(&u).unwrap();
                let pairing: Complex64 = j
                    .projections()
                    .zip(&gaps)
                    .map(|(m, g)| g.trace_product(&s).unwrap() * crate::spin_ops::f_function(&basis, l, m))
                    .sum();
                assert!(pairing.norm() < 1e-11, "j={j} L={l}: {pairing}");
            }
            let max_gap = gaps.iter().map(ComplexMatrix::frobenius_norm).fold(0.0, f64::max);
            if tj == 1 {
                assert!(max_gap < 1e-13);
            } else {
                assert!(max_gap > 1e-3);
            }
        }
    }

    #[test]
    fn shift_matrices_as_printed() {
        let (p, m) = shift_matrices(h(1));
        assert_eq!(p, ComplexMatrix::from_fn(2, |r, col| if (r, col) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) }));
        assert_eq!(m, p.adjoint());
        for tj in 0..=6 {
            let j = h(tj);
            let (p, m) = shift_matrices(j);
            let mut lhs = &p * &m;
            let last = j.dim() - 1;
            lhs[(last, last)] += c(1.0, 0.0);
            assert_eq!(lhs, ComplexMatrix::identity(j.dim()));
        }
    }

    #[test]
    fn qubit_shift_products() {
        let (p, m) = shift_matrices(h(1));
        assert_eq!(&p * &m, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn inverse_series_recovers_dequantizer() {
        let mut rng = seeded(29);
        for tj in 1..=4 {
            let j = h(tj);
            let basis = sl_basis(j).unwrap();
            for _ in 0..5 {
                let x = random_point(&mut rng, j);
                let back = dequantizer_from_quantizer(j, &x, 1e-10).unwrap();
                let direct = dequantizer(j, &x, &basis).unwrap();
                assert!(back.max_abs_diff(&direct).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn inverse_series_first_term_and_cap() {
        let j = h(4);
        for m in j.projections() {
            let x = TomographyPoint::new(m, EulerAngles::new(0.3, 0.8, 0.0).unwrap());
            let d0 = quantizer_from_dequantizer(j, &x).unwrap().scale_real(1.0 / 5.0);
            let expected = 1.0 - 0.5 * f64::from(u8::from(m != j)) - 0.5 * f64::from(u8::from(m != -j));
            assert!((d0.trace() - c(expected, 0.0)).norm() < 1e-13);
        }
        let x = pt(2, 0.3, 0.8, 0.0);
        let err = dequantizer_from_quantizer_capped(j, &x, 1e-10, 3).unwrap_err();
        assert!(matches!(err, Error::Convergence { iterations: 3, .. }));
        assert!(dequantizer_from_quantizer(j, &x, 0.0).is_err());
    }

    #[test]
    fn qubit_inverse_series_at_identity() {
        let j = h(1);
        let x = pt(1, 0.0, 0.0, 0.0);
        let back = dequantizer_from_quantizer(j, &x, 1e-12).unwrap();
        assert!(back.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap() < 1e-11);
    }

    #[test]
    fn tomogram_values() {
        let j = h(1);
        let up = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0, 0.0])).unwrap();
        for &b in &[0.0, 0.5, FRAC_PI_2, 2.0, PI] {
            let w = tomogram_value(&up, j, &pt(1, 1.2, b, 0.4)).unwrap();
            assert!((w - (b / 2.0).cos().powi(2)).abs() < 1e-14);
        }
        let mut rng = seeded(31);
        for tj in 1..=5 {
            let j = h(tj);
            let mixed = DensityMatrix::maximally_mixed(j.dim());
            let rho = random_density_matrix(&mut rng, j.dim());
            for _ in 0..10 {
                let x = random_point(&mut rng, j);
                let w = tomogram_value(&mixed, j, &x).unwrap();
                assert!((w - 1.0 / j.dim() as f64).abs() < 1e-14);
                let w1 = tomogram_value(&rho, j, &x).unwrap();
                let shifted = TomographyPoint::new(
                    x.m,
                    EulerAngles::new(x.angles.alpha, x.angles.beta, x.angles.gamma + 1.7).unwrap(),
                );
                let w2 = tomogram_value(&rho, j, &shifted).unwrap();
                assert!((-1e-12..=1.0 + 1e-12).contains(&w1));
                assert!((w1 - w2).abs() < 1e-13);
            }
        }
        assert!(tomogram_value(&DensityMatrix::maximally_mixed(3), h(1), &pt(1, 0.0, 0.0, 0.0)).is_err());
    }
}
