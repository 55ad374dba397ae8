use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::halfint::{check_pair, HalfInt};
use crate::su2::{ln_abs_hermite, ln_factorial, wigner_small_d};

/// Tomogram of |jμ⟩: w(m, β) = d^j_{mμ}(β)². Independent of α and γ.
pub fn pure_state_tomogram(j: HalfInt, mu: HalfInt, m: HalfInt, beta: f64) -> Result<f64> {
    check_pair(j, mu)?;
    check_pair(j, m)?;
    Ok(wigner_small_d(j, m, mu, beta).powi(2))
}

/// Large-j limit of the pure-state tomogram,
///
/// (π j sin²β)^{-1/2} [2^n n!]^{-1} e^{-x²} H_n(x)², n = j - μ,
/// x = (m - j cos β) / (√j sin β),
///
/// evaluated in the log domain. Singular at β = 0 and β = π.
pub fn asymptotic_tomogram(j: HalfInt, mu: HalfInt, m: f64, beta: f64) -> Result<f64> {
    check_pair(j, mu)?;
    if j.twice() == 0 {
        return Err(Error::Unsupported("the asymptotic form needs j > 0".into()));
    }
    let sin_b = beta.sin();
    if !beta.is_finite() || !(0.0..=PI).contains(&beta) || sin_b.abs() < 1e-300 || beta == 0.0 || beta == PI {
        return Err(Error::Singularity { beta });
    }
    let jf = j.value();
    let n = ((j - mu).twice() / 2) as u32;
    let x = (m - jf * beta.cos()) / (jf.sqrt() * sin_b);
    let ln_h = ln_abs_hermite(n, x);
    if ln_h == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let ln_w = -0.5 * (PI * jf * sin_b * sin_b).ln() - f64::from(n) * 2f64.ln() - ln_factorial(n) - x * x + 2.0 * ln_h;
    Ok(ln_w.exp())
}
