//! Printed low-spin matrices, compared entrywise with the library's output.

use num_complex::Complex64;

use crate::error::Result;
use crate::halfint::HalfInt;
use crate::matrix::ComplexMatrix;
use crate::random::{random_point, seeded};
use crate::spin_ops::{jz_matrix, projector, sl_basis, SLBasis};
use crate::tomography::{dequantizer, quantizer};

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub error: f64,
}

fn diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(values)
}

fn combo(terms: &[(f64, &ComplexMatrix)]) -> ComplexMatrix {
    let dim = terms[0].1.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for (c, m) in terms {
        out.add_scaled(Complex64::new(*c, 0.0), m);
    }
    out
}

fn worst(pairs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    pairs.into_iter().try_fold(0.0, |acc, e| Ok(f64::max(acc, e?)))
}

/// |jm⟩⟨jm| in its printed matrix form for j = 1/2, 1, 3/2.
fn printed_projector(j: HalfInt, m: f64) -> ComplexMatrix {
    match j.twice() {
        1 => combo(&[(0.5, &diag(&[1.0, 1.0])), (m, &diag(&[1.0, -1.0]))]),
        2 => combo(&[
            (1.0 / 3.0, &diag(&[1.0, 1.0, 1.0])),
            (m / 2.0, &diag(&[1.0, 0.0, -1.0])),
            ((3.0 * m * m - 2.0) / 6.0, &diag(&[1.0, -2.0, 1.0])),
        ]),
        3 => combo(&[
            (0.25, &diag(&[1.0; 4])),
            (m / 10.0, &diag(&[3.0, 1.0, -1.0, -3.0])),
            ((4.0 * m * m - 5.0) / 16.0, &diag(&[1.0, -1.0, -1.0, 1.0])),
            ((20.0 * m.powi(3) - 41.0 * m) / 120.0, &diag(&[1.0, -3.0, 3.0, -1.0])),
        ]),
        _ => unreachable!("printed only up to j = 3/2"),
    }
}

/// |jm⟩⟨jm| in its printed operator form, as polynomials in J_z.
fn printed_operator_expansion(j: HalfInt, m: f64) -> ComplexMatrix {
    let jz = jz_matrix(j);
    let id = ComplexMatrix::identity(j.dim());
    let jz2 = &jz * &jz;
    let jz3 = &jz2 * &jz;
    match j.twice() {
        1 => combo(&[(0.5, &id), (2.0 * m, &jz)]),
        2 => combo(&[(1.0 / 3.0, &id), (m / 2.0, &jz), ((3.0 * m * m - 2.0) / 6.0, &combo(&[(3.0, &jz2), (-2.0, &id)]))]),
        3 => combo(&[
            (0.25, &id),
            (m / 5.0, &jz),
            ((4.0 * m * m - 5.0) / 64.0, &combo(&[(4.0, &jz2), (-5.0, &id)])),
            ((20.0 * m.powi(3) - 41.0 * m) / 720.0, &combo(&[(20.0, &jz3), (-41.0, &jz)])),
        ]),
        _ => unreachable!("printed only up to j = 3/2"),
    }
}

fn projector_decomposition(twice_j: i32) -> Result<f64> {
    let j = HalfInt::from_twice(twice_j);
    let mut err: f64 = 0.0;
    for m in j.projections() {
        let exact = projector(j, m)?;
        err = err.max(printed_projector(j, m.value()).max_abs_diff(&exact)?);
        err = err.max(printed_operator_expansion(j, m.value()).max_abs_diff(&exact)?);
    }
    Ok(err)
}

/// The printed qubit and qutrit U(x) matrices, and D(x) obtained from them by
/// scaling the L-th term by 2L+1.
fn printed_operator(j: HalfInt, m: f64, alpha: f64, beta: f64, quantizer: bool) -> ComplexMatrix {
    let (sb, cb) = beta.sin_cos();
    let e = |k: f64| Complex64::from_polar(1.0, k * alpha);
    let r = |v: f64| Complex64::new(v, 0.0);
    let w = |l: usize| if quantizer { (2 * l + 1) as f64 } else { 1.0 };
    match j.twice() {
        1 => {
            let t1 = ComplexMatrix::from_fn(2, |a, b| match (a, b) {
                (0, 0) => r(cb),
                (1, 1) => r(-cb),
                (0, 1) => -e(1.0) * sb,
                _ => -e(-1.0) * sb,
            });
            combo(&[(0.5, &ComplexMatrix::identity(2)), (w(1) * m, &t1)])
        }
        2 => {
            let s2 = std::f64::consts::SQRT_2;
            let t1 = ComplexMatrix::from_fn(3, |a, b| match (a, b) {
                (0, 0) => r(cb),
                (2, 2) => r(-cb),
                (0, 1) | (1, 2) => -e(1.0) * sb / s2,
                (1, 0) | (2, 1) => -e(-1.0) * sb / s2,
                _ => r(0.0),
            });
            let p2 = (3.0 * cb * cb - 1.0) / 2.0;
            let cs = 3.0 * cb * sb / s2;
            let t2 = ComplexMatrix::from_fn(3, |a, b| match (a, b) {
                (0, 0) | (2, 2) => r(p2),
                (1, 1) => r(-2.0 * p2),
                (0, 1) => -e(1.0) * cs,
                (1, 0) => -e(-1.0) * cs,
                (1, 2) => e(1.0) * cs,
                (2, 1) => e(-1.0) * cs,
                (0, 2) => e(2.0) * 1.5 * sb * sb,
                _ => e(-2.0) * 1.5 * sb * sb,
            });
            combo(&[
                (1.0 / 3.0, &ComplexMatrix::identity(3)),
                (w(1) * m / 2.0, &t1),
                (w(2) * (3.0 * m * m - 2.0) / 6.0, &t2),
            ])
        }
        _ => unreachable!("printed only for the qubit and qutrit"),
    }
}

fn operator_matrices(twice_j: i32, seed: u64, samples: usize) -> Result<f64> {
    let j = HalfInt::from_twice(twice_j);
    let basis = sl_basis(j)?;
    let mut rng = seeded(seed);
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = random_point(&mut rng, j);
        let (m, a, b) = (x.m.value(), x.angles.alpha, x.angles.beta);
        err = err.max(dequantizer(j, &x, &basis)?.max_abs_diff(&printed_operator(j, m, a, b, false))?);
        err = err.max(quantizer(j, &x, &basis)?.max_abs_diff(&printed_operator(j, m, a, b, true))?);
    }
    Ok(err)
}

/// S_0 = I, S_1 = J_z, S_2 = 3J_z² - j(j+1), S_3 = 5J_z³ - (3j² + 3j - 1)J_z.
fn sl_printed_forms(basis: &SLBasis) -> Result<f64> {
    let j = basis.j();
    let jv = j.value();
    let jz = jz_matrix(j);
    let id = ComplexMatrix::identity(j.dim());
    let jz2 = &jz * &jz;
    let jz3 = &jz2 * &jz;
    let printed = [
        id.clone(),
        jz.clone(),
        combo(&[(3.0, &jz2), (-jv * (jv + 1.0), &id)]),
        combo(&[(5.0, &jz3), (-(3.0 * jv * jv + 3.0 * jv - 1.0), &jz)]),
    ];
    worst(printed.iter().take(basis.len()).enumerate().map(|(l, p)| basis.op(l).max_abs_diff(p)))
}

fn sl_forms() -> Result<f64> {
    let mut err: f64 = 0.0;
    for tj in 0..=11 {
        err = err.max(sl_printed_forms(&sl_basis(HalfInt::from_twice(tj))?)?);
    }
    // the printed small-spin matrices of S_2 and S_3
    let qutrit = sl_basis(HalfInt::ONE)?;
    err = err.max(qutrit.op(2).max_abs_diff(&diag(&[1.0, -2.0, 1.0]))?);
    let spin32 = sl_basis(HalfInt::from_twice(3))?;
    err = err.max(spin32.op(2).max_abs_diff(&diag(&[3.0, -3.0, -3.0, 3.0]))?);
    err = err.max(spin32.op(3).max_abs_diff(&diag(&[1.5, -4.5, 4.5, -1.5]))?);
    Ok(err)
}

/// Every golden comparison with its maximum entrywise error.
pub fn golden_checks(seed: u64) -> Result<Vec<GoldenCheck>> {
    Ok(vec![
        GoldenCheck { name: "projector_decomposition_qubit", error: projector_decomposition(1)? },
        GoldenCheck { name: "projector_decomposition_qutrit", error: projector_decomposition(2)? },
        GoldenCheck { name: "projector_decomposition_spin_3_2", error: projector_decomposition(3)? },
        GoldenCheck { name: "operator_matrices_qubit", error: operator_matrices(1, seed, 50)? },
        GoldenCheck { name: "operator_matrices_qutrit", error: operator_matrices(2, seed.wrapping_add(1), 50)? },
        GoldenCheck { name: "sl_forms_0_to_3", error: sl_forms()? },
    ])
}
