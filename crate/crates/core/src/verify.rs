//! Invariant suite with a machine-readable report.
//!
//! Each check measures one identity at a fixed seed and compares the
//! observed error with its tolerance. The building blocks are public so
//! that larger runs can reuse them with other sample counts.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::figure::{argmax_pair, figure_data, slice_sum_error, DEFAULT_BETA_POINTS};
use crate::golden::golden_checks;
use crate::halfint::HalfInt;
use crate::kernels::{
    delta_kernel_numeric, kernel_closed, kernel_numeric, marginalize_kernel, sample_dual_symbol, sample_symbol,
    star_product, star_product_samples, symbol, KernelKind,
};
use crate::random::{random_density_matrix, random_hermitian, random_point, random_projection, seeded};
use crate::su2::EulerAngles;
use crate::tomography::{
    dequantizer_exponential, dequantizer_from_quantizer, integrate_operator, make_grid, quantizer_exponential,
    quantizer_from_dequantizer, reconstruct_operator, sample_tomogram, Family, QuadratureGrid, SpinContext,
    TomographyPoint,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub tolerance: f64,
    pub observed: f64,
    pub passed: bool,
    /// Informational checks are reported but do not affect the verdict.
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub quantizer_scale: f64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces every check tolerance when set.
    pub tolerance: Option<f64>,
    /// Multiplies the quantizer used by the checks; 1 in normal runs.
    pub quantizer_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, tolerance: None, quantizer_scale: 1.0 }
    }
}

pub const QUANTIZER_FORM_NOTE: &str = "the exponential quantizer differs from the tensor form by terms orthogonal \
to every dequantizer sector; both reconstruct exactly";

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// max ||∫ w_ρ(x) D(x) dx - ρ||_F over random states.
pub fn round_trip_error(ctx: &SpinContext, grid: &QuadratureGrid, states: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..states {
        let rho = random_density_matrix(rng, ctx.j().dim());
        let w = sample_tomogram(&rho, grid)?;
        let back = reconstruct_operator(&w, ctx.table())?;
        err = err.max(back.sub(rho.matrix())?.frobenius_norm());
    }
    Ok(err)
}

/// max |∫ Tr(A U(x)) D(x) dx - A| over random Hermitian A.
pub fn biorthogonality_error(
    ctx: &SpinContext,
    grid: &QuadratureGrid,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let a = random_hermitian(rng, ctx.j().dim());
        let f = sample_symbol(ctx, &a, grid)?;
        let back = integrate_operator(grid, f.values(), ctx.table(), Family::Quantizer)?;
        err = err.max(back.max_abs_diff(&a)?);
    }
    Ok(err)
}

/// Tensor against exponential form of U(x), max entrywise.
pub fn dequantizer_form_error(ctx: &SpinContext, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = random_point(rng, ctx.j());
        err = err.max(ctx.dequantizer(&x)?.max_abs_diff(&dequantizer_exponential(ctx.j(), &x)?)?);
    }
    Ok(err)
}

/// Tensor against exponential form of D(x), max entrywise.
pub fn quantizer_form_error(ctx: &SpinContext, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = random_point(rng, ctx.j());
        err = err.max(ctx.quantizer(&x)?.max_abs_diff(&quantizer_exponential(ctx.j(), &x)?)?);
    }
    Ok(err)
}

/// D from U through the R± bridge against the exponential D.
pub fn bridge_error(j: HalfInt, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = random_point(rng, j);
        err = err.max(quantizer_from_dequantizer(j, &x)?.max_abs_diff(&quantizer_exponential(j, &x)?)?);
    }
    Ok(err)
}

/// U recovered from D by the truncated inverse series against U.
pub fn inverse_series_error(ctx: &SpinContext, samples: usize, tol: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let x = random_point(rng, ctx.j());
        err = err.max(dequantizer_from_quantizer(ctx.j(), &x, tol)?.max_abs_diff(&ctx.dequantizer(&x)?)?);
    }
    Ok(err)
}

/// Closed form against trace form of one kernel.
pub fn kernel_closed_error(ctx: &SpinContext, kind: KernelKind, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j = ctx.j();
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let (x3, x2, x1) = (random_point(rng, j), random_point(rng, j), random_point(rng, j));
        let a = kernel_numeric(ctx, kind, &x3, &x2, &x1)?;
        let b = kernel_closed(j, kind, &x3, &x2, &x1)?;
        err = err.max((a - b).norm());
    }
    Ok(err)
}

fn shift_gamma(x: &TomographyPoint, by: f64) -> Result<TomographyPoint> {
    let a = x.angles;
    Ok(TomographyPoint::new(x.m, EulerAngles::new(a.alpha, a.beta, (a.gamma + by).rem_euclid(2.0 * PI))?))
}

/// Change of the star and dual kernels under independent γ shifts.
pub fn gamma_shift_error(ctx: &SpinContext, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j = ctx.j();
    let mut err: f64 = 0.0;
    for _ in 0..samples {
        let xs = [random_point(rng, j), random_point(rng, j), random_point(rng, j)];
        let mut shifted = Vec::with_capacity(3);
        for x in &xs {
            shifted.push(shift_gamma(x, rng.gen_range(0.0..2.0 * PI))?);
        }
        for kind in [KernelKind::Delta, KernelKind::Star, KernelKind::Dual] {
            let a = kernel_numeric(ctx, kind, &xs[0], &xs[1], &xs[2])?;
            let b = kernel_numeric(ctx, kind, &shifted[0], &shifted[1], &shifted[2])?;
            err = err.max((a - b).norm());
        }
    }
    Ok(err)
}

/// Largest imaginary part of the star and dual kernels over coplanar axes.
pub fn coplanar_imaginary_part(ctx: &SpinContext, samples: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let j = ctx.j();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let alpha = rng.gen_range(0.0..PI);
        let mut xs = Vec::with_capacity(3);
        for _ in 0..3 {
            let a = if rng.gen_bool(0.5) { alpha + PI } else { alpha };
            let angles = EulerAngles::new(a, rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI))?;
            xs.push(TomographyPoint::new(random_projection(rng, j), angles));
        }
        for kind in [KernelKind::Star, KernelKind::Dual] {
            worst = worst.max(kernel_numeric(ctx, kind, &xs[0], &xs[1], &xs[2])?.im.abs());
        }
    }
    Ok(worst)
}

/// |∫ K(x3, x2, x1) dx3 - Tr(D(x2) U(x1))| over random pairs.
pub fn marginalization_error(
    ctx: &SpinContext,
    grid: &QuadratureGrid,
    pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..pairs {
        let (x2, x1) = (random_point(rng, ctx.j()), random_point(rng, ctx.j()));
        let marg = marginalize_kernel(ctx, &x2, &x1, grid)?;
        err = err.max((marg - delta_kernel_numeric(ctx, &x2, &x1)?).norm());
    }
    Ok(err)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarProductErrors {
    pub correctness: f64,
    pub associativity: f64,
}

/// Double-quadrature star products of random Hermitian symbols: f_A * f_B
/// against Tr(AB U(x1)), and (f_A * f_B) * f_C against f_A * (f_B * f_C).
pub fn star_product_errors(
    ctx: &SpinContext,
    grid: &QuadratureGrid,
    points: usize,
    rng: &mut ChaCha8Rng,
) -> Result<StarProductErrors> {
    let dim = ctx.j().dim();
    let (a, b, c) = (random_hermitian(rng, dim), random_hermitian(rng, dim), random_hermitian(rng, dim));
    let fa = sample_symbol(ctx, &a, grid)?;
    let fb = sample_symbol(ctx, &b, grid)?;
    let fc = sample_symbol(ctx, &c, grid)?;
    let fab = star_product_samples(ctx, &fa, &fb)?;
    let fbc = star_product_samples(ctx, &fb, &fc)?;
    let ab = &a * &b;
    let mut errors = StarProductErrors { correctness: 0.0, associativity: 0.0 };
    for _ in 0..points {
        let x1 = random_point(rng, ctx.j());
        let exact = symbol(ctx, &ab, &x1)?;
        errors.correctness = errors.correctness.max((star_product(ctx, &fa, &fb, &x1)? - exact).norm());
        let left = star_product(ctx, &fab, &fc, &x1)?;
        let right = star_product(ctx, &fa, &fbc, &x1)?;
        errors.associativity = errors.associativity.max((left - right).norm());
    }
    Ok(errors)
}

/// |∫ f_A f^d_B dx - Tr(AB)| over random Hermitian pairs.
pub fn dual_pairing_error(ctx: &SpinContext, grid: &QuadratureGrid, pairs: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let dim = ctx.j().dim();
    let mut err: f64 = 0.0;
    for _ in 0..pairs {
        let (a, b) = (random_hermitian(rng, dim), random_hermitian(rng, dim));
        let fa = sample_symbol(ctx, &a, grid)?;
        let fb = sample_dual_symbol(ctx, &b, grid)?;
        let pairing: Complex64 =
            grid.nodes().zip(fa.values().iter().zip(fb.values())).map(|((_, w), (p, q))| p * q * w).sum();
        err = err.max((pairing - a.trace_product(&b)?).norm());
    }
    Ok(err)
}

/// |∫ w(x2) Tr(D(x2) U(x1)) dx2 - w(x1)| over random states and points.
pub fn reproduction_error(
    ctx: &SpinContext,
    grid: &QuadratureGrid,
    states: usize,
    points: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..states {
        let rho = random_density_matrix(rng, ctx.j().dim());
        let w = sample_tomogram(&rho, grid)?;
        let samples: Vec<Complex64> = w.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        // ∫ w(x2) D(x2) dx2 once, then traced against each U(x1)
        let smeared = integrate_operator(grid, &samples, ctx.table(), Family::Quantizer)?;
        for _ in 0..points {
            let x1 = random_point(rng, ctx.j());
            let u1 = ctx.dequantizer(&x1)?;
            let direct = rho.matrix().trace_product(&u1)?;
            err = err.max((smeared.trace_product(&u1)? - direct).norm());
        }
    }
    Ok(err)
}

/// |Σ_m w(m, α, β) - 1| and |∫ w dx - 1| for random states.
pub fn normalization_error(grid: &QuadratureGrid, states: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut err: f64 = 0.0;
    for _ in 0..states {
        let w = sample_tomogram(&random_density_matrix(rng, grid.j().dim()), grid)?;
        err = err.max(w.projection_sum_error()).max(w.integral_error());
    }
    Ok(err)
}

struct Suite {
    options: VerifyOptions,
    rng: ChaCha8Rng,
    checks: Vec<CheckResult>,
}

impl Suite {
    fn push(&mut self, name: impl Into<String>, tolerance: f64, observed: f64) {
        self.push_with(name, tolerance, observed, true, None);
    }

    fn push_with(&mut self, name: impl Into<String>, tolerance: f64, observed: f64, required: bool, note: Option<&str>) {
        let tolerance = self.options.tolerance.unwrap_or(tolerance);
        self.checks.push(CheckResult {
            name: name.into(),
            tolerance,
            observed,
            passed: observed.is_finite() && observed <= tolerance,
            required,
            note: note.map(str::to_owned),
        });
    }

    fn context(&self, j: HalfInt) -> Result<SpinContext> {
        let ctx = SpinContext::new(j)?;
        let table = ctx.table().clone().with_quantizer_scale(self.options.quantizer_scale);
        Ok(ctx.with_table(table))
    }
}

/// Run every check at the configured seed.
pub fn run(options: VerifyOptions) -> Result<VerifyReport> {
    let mut s = Suite { options, rng: seeded(options.seed), checks: Vec::new() };

    for g in golden_checks(options.seed)? {
        s.push(format!("golden_{}", g.name), 1e-12, g.error);
    }

    for tj in 1..=5 {
        let ctx = s.context(h(tj))?;
        let grid = make_grid(h(tj), 1)?;
        let e = normalization_error(&grid, 3, &mut s.rng)?;
        s.push(format!("tomogram_normalization_2j{tj}"), 1e-10, e);
        let e = round_trip_error(&ctx, &grid, 5, &mut s.rng)?;
        s.push(format!("round_trip_2j{tj}"), 1e-10, e);
        let e = reproduction_error(&ctx, &grid, 2, 5, &mut s.rng)?;
        s.push(format!("reproduction_2j{tj}"), 1e-10, e);
        if tj <= 4 {
            let e = biorthogonality_error(&ctx, &grid, 3, &mut s.rng)?;
            s.push(format!("biorthogonality_2j{tj}"), 1e-10, e);
            let e = dual_pairing_error(&ctx, &grid, 3, &mut s.rng)?;
            s.push(format!("dual_pairing_2j{tj}"), 1e-10, e);
        }
    }

    for tj in 1..=6 {
        let j = h(tj);
        let ctx = s.context(j)?;
        let e = dequantizer_form_error(&ctx, 20, &mut s.rng)?;
        s.push(format!("dequantizer_forms_2j{tj}"), 1e-12, e);
        let e = bridge_error(j, 20, &mut s.rng)?;
        s.push(format!("quantizer_bridge_2j{tj}"), 1e-8, e);
        let e = inverse_series_error(&ctx, 5, 1e-10, &mut s.rng)?;
        s.push(format!("inverse_series_2j{tj}"), 1e-8, e);
        let e = quantizer_form_error(&ctx, 20, &mut s.rng)?;
        let informational = tj >= 2;
        s.push_with(
            format!("quantizer_forms_2j{tj}"),
            1e-12,
            e,
            !informational,
            informational.then_some(QUANTIZER_FORM_NOTE),
        );
    }

    for tj in [1, 2] {
        let ctx = s.context(h(tj))?;
        let label = if tj == 1 { "qubit" } else { "qutrit" };
        for (kind, name) in [(KernelKind::Delta, "delta"), (KernelKind::Star, "star"), (KernelKind::Dual, "dual")] {
            let e = kernel_closed_error(&ctx, kind, 200, &mut s.rng)?;
            s.push(format!("kernel_closed_{name}_{label}"), 1e-12, e);
        }
        let grid = make_grid(h(tj), 1)?;
        let e = marginalization_error(&ctx, &grid, if tj == 1 { 5 } else { 3 }, &mut s.rng)?;
        s.push(format!("marginalization_{label}"), 1e-10, e);
    }

    for tj in 1..=4 {
        let ctx = s.context(h(tj))?;
        let e = gamma_shift_error(&ctx, 10, &mut s.rng)?;
        s.push(format!("kernel_gamma_shift_2j{tj}"), 1e-12, e);
        let e = coplanar_imaginary_part(&ctx, 10, &mut s.rng)?;
        s.push(format!("kernel_coplanar_reality_2j{tj}"), 1e-12, e);
    }

    let ctx = s.context(h(1))?;
    let grid = make_grid(h(1), 1)?;
    let star = star_product_errors(&ctx, &grid, 3, &mut s.rng)?;
    s.push("star_product_qubit", 1e-9, star.correctness);
    s.push("star_associativity_qubit", 1e-8, star.associativity);

    let fifty = h(100);
    let rows = figure_data(fifty, DEFAULT_BETA_POINTS)?;
    s.push("figure_slice_sums_j50", 1e-9, slice_sum_error(&rows));
    let (exact, asym) = argmax_pair(fifty, fifty, PI / 3.0)?;
    s.push("figure_argmax_offset_j50", 1.0, (exact.value() - asym.value()).abs());

    let passed = s.checks.iter().all(|c| c.passed || !c.required);
    Ok(VerifyReport { seed: options.seed, quantizer_scale: options.quantizer_scale, passed, checks: s.checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes_and_is_stable() {
        let a = run(VerifyOptions { seed: 7, ..Default::default() }).unwrap();
        for c in &a.checks {
            assert!(c.passed || !c.required, "{} observed {:e} > {:e}", c.name, c.observed, c.tolerance);
        }
        assert!(a.passed);
        let b = run(VerifyOptions { seed: 7, ..Default::default() }).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn perturbed_quantizer_fails_biorthogonality() {
        let r = run(VerifyOptions { seed: 7, quantizer_scale: 1.01, ..Default::default() }).unwrap();
        assert!(!r.passed);
        let bio: Vec<_> = r.checks.iter().filter(|c| c.name.starts_with("biorthogonality")).collect();
        assert!(!bio.is_empty() && bio.iter().all(|c| !c.passed));
    }

    #[test]
    fn tolerance_override_applies_everywhere() {
        let r = run(VerifyOptions { seed: 1, tolerance: Some(1e-30), ..Default::default() }).unwrap();
        assert!(r.checks.iter().all(|c| c.tolerance == 1e-30));
        assert!(!r.passed);
    }
}
