//! SU(2) special functions: factorials, Clebsch–Gordan coefficients,
//! Wigner d- and D-functions and Hermite polynomials.
//!
//! Factorial ratios are formed in the log domain with signs tracked
//! separately, so spins up to j = 50 evaluate without overflow.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::{check_pair, triangle, HalfInt};

/// Euler angles (zyz) of a rotation. `alpha` and `gamma` live in [0, 2π),
/// `beta` in [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { alpha: 0.0, beta: 0.0, gamma: 0.0 };

    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::Angles(format!("non-finite angle ({alpha}, {beta}, {gamma})")));
        }
        if !(0.0..=PI).contains(&beta) {
            return Err(Error::Angles(format!("beta = {beta} outside [0, pi]")));
        }
        Ok(EulerAngles { alpha: wrap_angle(alpha), beta, gamma: wrap_angle(gamma) })
    }
}

fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

const LN_FACTORIAL_TABLE: usize = 1024;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LN_FACTORIAL_TABLE);
        let mut exact: u64 = 1;
        table.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE as u64 {
            if k <= 20 {
                exact *= k;
                table.push((exact as f64).ln());
            } else {
                let prev = table[k as usize - 1];
                table.push(prev + (k as f64).ln());
            }
        }
        table
    })
}

/// ln(n!).
pub fn ln_factorial(n: u32) -> f64 {
    let table = ln_factorial_table();
    let n = n as usize;
    if n < table.len() {
        return table[n];
    }
    let mut acc = table[table.len() - 1];
    for k in table.len()..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// ln(x!) for an integer-valued half-integer; `None` when x is negative.
fn ln_fact_half(x: HalfInt) -> Option<f64> {
    let n = x.as_integer().expect("factorial argument must be integral");
    (n >= 0).then(|| ln_factorial(n as u32))
}

/// Clebsch–Gordan coefficient ⟨j1 m1; j2 m2 | J M⟩ (Condon–Shortley phase).
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<f64> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j, m)?;
    if m != m1 + m2 || !triangle(j1, j2, j) {
        return Ok(0.0);
    }
    Ok(cg_racah(j1, m1, j2, m2, j, m))
}

fn cg_racah(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> f64 {
    let lf = |x: HalfInt| ln_fact_half(x).expect("negative factorial in CG prefactor");
    let ln_pre = 0.5
        * ((f64::from(j.twice()) + 1.0).ln() + lf(j + j1 - j2) + lf(j - j1 + j2) + lf(j1 + j2 - j)
            - lf(j1 + j2 + j + HalfInt::ONE)
            + lf(j + m)
            + lf(j - m)
            + lf(j1 - m1)
            + lf(j1 + m1)
            + lf(j2 - m2)
            + lf(j2 + m2));

    let mut sum = 0.0;
    let mut k = HalfInt::ZERO;
    loop {
        let args = [
            k,
            j1 + j2 - j - k,
            j1 - m1 - k,
            j2 + m2 - k,
            j - j2 + m1 + k,
            j - j1 - m2 + k,
        ];
        // the first three arguments only decrease with k
        if args[1].twice() < 0 || args[2].twice() < 0 || args[3].twice() < 0 {
            break;
        }
        if args[4].twice() >= 0 && args[5].twice() >= 0 {
            let ln_den: f64 = args.iter().map(|&a| lf(a)).sum();
            let term = (ln_pre - ln_den).exp();
            if k.twice() % 4 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        k = k + HalfInt::ONE;
    }
    sum
}

/// Jacobi polynomial P_n^{(a,b)}(x) by the three-term recurrence in n.
fn jacobi_polynomial(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut p_prev = 1.0;
    let mut p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    p
}

/// Wigner small-d function d^j_{m1 m2}(β).
///
/// Evaluated through the Jacobi-polynomial form, whose recurrence stays
/// accurate at large j where the alternating factorial series cancels
/// catastrophically. Returns 0 for labels outside the representation.
pub fn wigner_small_d(j: HalfInt, m1: HalfInt, m2: HalfInt, beta: f64) -> f64 {
    if check_pair(j, m1).is_err() || check_pair(j, m2).is_err() {
        return 0.0;
    }
    let tj = j.twice();
    let (t1, t2) = (m1.twice(), m2.twice());
    // all of these are integers: j±m are integral for valid pairs
    let cands = [(tj + t2) / 2, (tj - t2) / 2, (tj + t1) / 2, (tj - t1) / 2];
    let k = *cands.iter().min().unwrap();
    let (a, lambda) = if k == cands[0] {
        ((t1 - t2) / 2, (t1 - t2) / 2)
    } else if k == cands[1] || k == cands[2] {
        ((t2 - t1) / 2, 0)
    } else {
        ((t1 - t2) / 2, (t1 - t2) / 2)
    };
    let b = tj - 2 * k - a;
    debug_assert!(a >= 0 && b >= 0 && k >= 0);

    let (a_u, b_u, k_u) = (a as u32, b as u32, k as u32);
    let n_u = tj as u32 - k_u;
    // sqrt( C(2j-k, k+a) / C(k+b, b) )
    let ln_binom = |n: u32, r: u32| ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r);
    let ln_norm = 0.5 * (ln_binom(n_u, k_u + a_u) - ln_binom(k_u + b_u, b_u));

    let (s, c) = ((beta / 2.0).sin(), (beta / 2.0).cos());
    let p = jacobi_polynomial(k_u, f64::from(a), f64::from(b), beta.cos());
    if p == 0.0 || (a > 0 && s == 0.0) || (b > 0 && c == 0.0) {
        return 0.0;
    }
    let mut ln_mag = ln_norm + p.abs().ln();
    if a > 0 {
        ln_mag += f64::from(a) * s.abs().ln();
    }
    if b > 0 {
        ln_mag += f64::from(b) * c.abs().ln();
    }
    let mut sign = p.signum();
    if a % 2 == 1 && s < 0.0 {
        sign = -sign;
    }
    if b % 2 == 1 && c < 0.0 {
        sign = -sign;
    }
    if lambda.rem_euclid(2) == 1 {
        sign = -sign;
    }
    // |d| <= 1; rounding in the log-factorials can overshoot by ulps
    sign * ln_mag.min(0.0).exp()
}

/// Wigner small-d function evaluated as the explicit alternating sum over s,
/// term by term in the log domain. Accurate for moderate j; large j loses
/// digits to cancellation, so [`wigner_small_d`] is the production path.
pub fn wigner_small_d_series(j: HalfInt, m1: HalfInt, m2: HalfInt, beta: f64) -> f64 {
    if check_pair(j, m1).is_err() || check_pair(j, m2).is_err() {
        return 0.0;
    }
    let lf = |x: HalfInt| ln_fact_half(x);
    let ln_num = 0.5
        * (lf(j + m2).unwrap() + lf(j - m2).unwrap() + lf(j + m1).unwrap() + lf(j - m1).unwrap());
    let (c, s) = ((beta / 2.0).cos(), -(beta / 2.0).sin());
    let mut sum = 0.0;
    let mut k = HalfInt::ZERO;
    while (j - m1 - k).twice() >= 0 && (j + m2 - k).twice() >= 0 {
        let d = m1 - m2 + k;
        if d.twice() >= 0 {
            let ln_den = lf(k).unwrap() + lf(j - m1 - k).unwrap() + lf(j + m2 - k).unwrap() + lf(d).unwrap();
            let cos_pow = (j + j + m2 - m1 - k - k).as_integer().unwrap();
            let sin_pow = (m1 - m2 + k + k).as_integer().unwrap();
            let mut term = (ln_num - ln_den).exp();
            term *= c.powi(cos_pow) * s.powi(sin_pow);
            if k.twice() % 4 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        k = k + HalfInt::ONE;
    }
    sum
}

/// Wigner D-function D^j_{m1 m2}(α, β, γ) = e^{-i m2 α} e^{-i m1 γ} d^j_{m1 m2}(β).
pub fn wigner_d(j: HalfInt, m1: HalfInt, m2: HalfInt, angles: EulerAngles) -> Complex64 {
    let d = wigner_small_d(j, m1, m2, angles.beta);
    let phase = -(m2.value() * angles.alpha + m1.value() * angles.gamma);
    Complex64::from_polar(d, phase)
}

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut h_prev = 1.0;
    if n == 0 {
        return h_prev;
    }
    let mut h = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * h - 2.0 * f64::from(k) * h_prev;
        h_prev = h;
        h = next;
    }
    h
}

/// ln|H_n(x)|, with the recurrence rescaled as it goes so that large
/// arguments do not overflow.
pub fn ln_abs_hermite(n: u32, x: f64) -> f64 {
    let mut h_prev = 1.0_f64;
    if n == 0 {
        return 0.0;
    }
    let mut h = 2.0 * x;
    let mut ln_scale = 0.0;
    for k in 1..n {
        let next = 2.0 * x * h - 2.0 * f64::from(k) * h_prev;
        h_prev = h;
        h = next;
        let mag = h.abs();
        if mag > 1e100 {
            h /= mag;
            h_prev /= mag;
            ln_scale += mag.ln();
        }
    }
    h.abs().ln() + ln_scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    /// Racah's formula with plain (non-log) factorials, valid for small labels.
    fn cg_oracle(tj1: i32, tm1: i32, tj2: i32, tm2: i32, tj: i32, tm: i32) -> f64 {
        if tm != tm1 + tm2 || tj < (tj1 - tj2).abs() || tj > tj1 + tj2 {
            return 0.0;
        }
        let f = |t: i32| -> f64 {
            assert!(t % 2 == 0 && t >= 0);
            (1..=(t / 2) as u64).map(|k| k as f64).product()
        };
        let pre = (f64::from(tj + 1) * f(tj + tj1 - tj2) * f(tj - tj1 + tj2) * f(tj1 + tj2 - tj)
            / f(tj1 + tj2 + tj + 2))
        .sqrt()
            * (f(tj + tm) * f(tj - tm) * f(tj1 - tm1) * f(tj1 + tm1) * f(tj2 - tm2) * f(tj2 + tm2)).sqrt();
        let mut sum = 0.0;
        for k in (0..=2 * (tj1 + tj2)).step_by(2) {
            let args = [k, tj1 + tj2 - tj - k, tj1 - tm1 - k, tj2 + tm2 - k, tj - tj2 + tm1 + k, tj - tj1 - tm2 + k];
            if args.iter().any(|&a| a < 0) {
                continue;
            }
            let den: f64 = args.iter().map(|&a| f(a)).product();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign / den;
        }
        pre * sum
    }

    #[test]
    fn ln_factorial_values() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-15);
        let reference = statrs::function::gamma::ln_gamma(101.0);
        assert!(((ln_factorial(100) - reference) / reference).abs() < 1e-12);
        let reference = statrs::function::gamma::ln_gamma(2001.0);
        assert!(((ln_factorial(2000) - reference) / reference).abs() < 1e-12);
        for n in 1..200 {
            assert!(ln_factorial(n) >= ln_factorial(n - 1));
        }
    }

    #[test]
    fn cg_special_values() {
        let v = clebsch_gordan(h(1), h(1), h(1), h(-1), h(0), h(0)).unwrap();
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cg_oracle(1, 1, 1, -1, 0, 0) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(clebsch_gordan(h(1), h(1), h(1), h(1), h(2), h(0)).unwrap(), 0.0);
        for tj in 0..=6 {
            for tm in (-tj..=tj).step_by(2) {
                let v = clebsch_gordan(h(tj), h(tm), h(tj), h(-tm), h(0), h(0)).unwrap();
                let sign = if ((tj - tm) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let expect = sign / f64::from(tj + 1).sqrt();
                assert!((v - expect).abs() < 1e-14, "j={tj}/2 m={tm}/2");
                assert!((cg_oracle(tj, tm, tj, -tm, 0, 0) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cg_matches_oracle() {
        for tj1 in 0i32..=4 {
            for tj2 in 0i32..=4 {
                for tj in ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2) {
                    for tm1 in (-tj1..=tj1).step_by(2) {
                        for tm2 in (-tj2..=tj2).step_by(2) {
                            let tm = tm1 + tm2;
                            if tm.abs() > tj {
                                continue;
                            }
                            let v = clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(tj), h(tm)).unwrap();
                            let o = cg_oracle(tj1, tm1, tj2, tm2, tj, tm);
                            assert!((v - o).abs() < 1e-13, "{tj1} {tm1} {tj2} {tm2} {tj} {tm}: {v} vs {o}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cg_orthogonality() {
        for tj1 in 0i32..=4 {
            for tj2 in 0i32..=4 {
                let js: Vec<i32> = ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2).collect();
                for &ta in &js {
                    for &tb in &js {
                        for tma in (-ta..=ta).step_by(2) {
                            for tmb in (-tb..=tb).step_by(2) {
                                let mut s = 0.0;
                                for tm1 in (-tj1..=tj1).step_by(2) {
                                    for tm2 in (-tj2..=tj2).step_by(2) {
                                        if tm1 + tm2 != tma || tm1 + tm2 != tmb {
                                            continue;
                                        }
                                        s += clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(ta), h(tma)).unwrap()
                                            * clebsch_gordan(h(tj1), h(tm1), h(tj2), h(tm2), h(tb), h(tmb)).unwrap();
                                    }
                                }
                                let expect = if ta == tb && tma == tmb { 1.0 } else { 0.0 };
                                assert!((s - expect).abs() < 1e-12);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cg_rejects_invalid_pairs() {
        assert!(clebsch_gordan(h(1), h(3), h(1), h(-1), h(0), h(0)).is_err());
        assert!(clebsch_gordan(h(1), h(0), h(1), h(-1), h(0), h(0)).is_err());
    }

    #[test]
    fn small_d_spin_half() {
        for &beta in &[0.0, 0.3, 1.2, 2.5, PI] {
            let c = (beta / 2.0).cos();
            let s = (beta / 2.0).sin();
            assert!((wigner_small_d(h(1), h(1), h(1), beta) - c).abs() < 1e-15);
            assert!((wigner_small_d(h(1), h(1), h(-1), beta) + s).abs() < 1e-15);
            assert!((wigner_small_d(h(1), h(-1), h(1), beta) - s).abs() < 1e-15);
            assert!((wigner_small_d(h(1), h(-1), h(-1), beta) - c).abs() < 1e-15);
            assert!((wigner_small_d_series(h(1), h(1), h(1), beta) - c).abs() < 1e-15);
        }
    }

    #[test]
    fn small_d_identity_rotation() {
        for tj in 0..=10 {
            for t1 in (-tj..=tj).step_by(2) {
                for t2 in (-tj..=tj).step_by(2) {
                    let expect = if t1 == t2 { 1.0 } else { 0.0 };
                    assert!((wigner_small_d(h(tj), h(t1), h(t2), 0.0) - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn small_d_stretched_state_j50() {
        for &beta in &[0.1f64, 0.7, 1.5, 2.2, 3.0] {
            let expect = (beta / 2.0).cos().powi(100);
            let v = wigner_small_d(h(100), h(100), h(100), beta);
            assert!((v - expect).abs() <= 1e-14 * expect.max(1e-300) + 1e-300, "{v} vs {expect}");
            let series = wigner_small_d_series(h(100), h(100), h(100), beta);
            assert!((series - expect).abs() <= 1e-13 * expect);
        }
    }

    #[test]
    fn small_d_forms_agree_for_moderate_spin() {
        for tj in 0..=12 {
            for t1 in (-tj..=tj).step_by(2) {
                for t2 in (-tj..=tj).step_by(2) {
                    for &beta in &[0.0, 0.4, 1.1, 1.9, 2.8, PI] {
                        let a = wigner_small_d(h(tj), h(t1), h(t2), beta);
                        let b = wigner_small_d_series(h(tj), h(t1), h(t2), beta);
                        assert!((a - b).abs() < 1e-12, "j={tj}/2 {t1} {t2} beta={beta}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_d_symmetry() {
        for tj in 0i32..=6 {
            for t1 in (-tj..=tj).step_by(2) {
                for t2 in (-tj..=tj).step_by(2) {
                    for &beta in &[0.2, 1.3, 2.9] {
                        let sign = if ((t1 - t2) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                        let a = wigner_small_d(h(tj), h(t1), h(t2), beta);
                        let b = wigner_small_d(h(tj), h(t2), h(t1), beta);
                        assert!((a - sign * b).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn small_d_large_spin_is_finite_and_unitary() {
        let j = h(100);
        for k in 1..=30 {
            let beta = 0.1 * f64::from(k);
            for m1 in j.projections() {
                let mut row = 0.0;
                for m2 in j.projections() {
                    let d = wigner_small_d(j, m1, m2, beta);
                    assert!(d.is_finite() && d.abs() <= 1.0 + 1e-12);
                    row += d * d;
                }
                assert!((row - 1.0).abs() < 1e-10, "beta={beta} m1={m1}: {row}");
            }
        }
    }

    #[test]
    fn big_d_properties() {
        let angles = EulerAngles::new(0.7, 1.1, 2.3).unwrap();
        let j = h(4);
        for m1 in j.projections() {
            for m2 in j.projections() {
                let id = wigner_d(j, m1, m2, EulerAngles::IDENTITY);
                let expect = if m1 == m2 { 1.0 } else { 0.0 };
                assert!((id - Complex64::new(expect, 0.0)).norm() < 1e-15);
                let shifted = EulerAngles::new(2.0, 1.1, 5.0).unwrap();
                assert!((wigner_d(j, m1, m2, angles).norm() - wigner_d(j, m1, m2, shifted).norm()).abs() < 1e-14);
            }
            let row: f64 = j.projections().map(|m2| wigner_d(j, m1, m2, angles).norm_sqr()).sum();
            assert!((row - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 3.7), 1.0);
        for &x in &[-1.5, 0.0, 0.3, 2.0] {
            assert!((hermite(2, x) - (4.0 * x * x - 2.0)).abs() < 1e-13);
        }
        // H_5(x) = 32x^5 - 160x^3 + 120x
        let series = 32.0 - 160.0 + 120.0;
        assert!((hermite(5, 1.0) - series).abs() < 1e-12);
        for &x in &[0.3, -2.5, 7.0, 40.0] {
            let direct = hermite(30, x).abs().ln();
            assert!((ln_abs_hermite(30, x) - direct).abs() < 1e-10 * direct.abs().max(1.0));
        }
        // (2x)^n dominates for huge x
        let x = 1e60;
        assert!((ln_abs_hermite(50, x) - 50.0 * (2.0 * x).ln()).abs() < 1e-10);
    }

    #[test]
    fn euler_angles_normalize() {
        let a = EulerAngles::new(-0.5, 1.0, 7.0).unwrap();
        assert!((a.alpha - (TAU - 0.5)).abs() < 1e-15);
        assert!((a.gamma - (7.0 - TAU)).abs() < 1e-15);
        assert!(EulerAngles::new(0.0, -0.1, 0.0).is_err());
        assert!(EulerAngles::new(0.0, 3.2, 0.0).is_err());
        assert!(EulerAngles::new(f64::NAN, 1.0, 0.0).is_err());
    }
}
