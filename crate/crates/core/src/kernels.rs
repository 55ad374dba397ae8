//! Tomographic symbols, dual symbols and the star-product kernels.
//!
//! Numeric kernels are traces of products of quantizers and dequantizers and
//! work for any spin. The qubit and qutrit closed forms are written in terms
//! of the quantization axes n_i and projections m_i and are kept as separate
//! code paths so that the two can be compared.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::matrix::ComplexMatrix;
use crate::su2::EulerAngles;
use crate::tomography::{QuadratureGrid, SpinContext, TomographyPoint};

/// Unit vector (cos α sin β, sin α sin β, cos β) of the quantization axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisVector {
    pub n: [f64; 3],
}

impl AxisVector {
    pub fn dot(&self, other: &AxisVector) -> f64 {
        dot(self.n, other.n)
    }

    pub fn cross(&self, other: &AxisVector) -> [f64; 3] {
        cross(self.n, other.n)
    }

    pub fn norm(&self) -> f64 {
        dot(self.n, self.n).sqrt()
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// n1 · (n2 × n3)
pub fn triple_product(n1: &AxisVector, n2: &AxisVector, n3: &AxisVector) -> f64 {
    dot(n1.n, cross(n2.n, n3.n))
}

pub fn axis_vector(angles: EulerAngles) -> AxisVector {
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    AxisVector { n: [ca * sb, sa * sb, cb] }
}

/// f_A(x) = Tr(A U(x)).
pub fn symbol(ctx: &SpinContext, a: &ComplexMatrix, x: &TomographyPoint) -> Result<Complex64> {
    a.trace_product(&ctx.dequantizer(x)?)
}

/// f^d_B(x) = Tr(B D(x)).
pub fn dual_symbol(ctx: &SpinContext, b: &ComplexMatrix, x: &TomographyPoint) -> Result<Complex64> {
    b.trace_product(&ctx.quantizer(x)?)
}

/// Tr(D(x2) U(x1)), the kernel of the identity on tomograms.
pub fn delta_kernel_numeric(ctx: &SpinContext, x2: &TomographyPoint, x1: &TomographyPoint) -> Result<Complex64> {
    ctx.quantizer(x2)?.trace_product(&ctx.dequantizer(x1)?)
}

/// K(x3, x2, x1) = Tr(D(x3) D(x2) U(x1)).
pub fn star_kernel_numeric(
    ctx: &SpinContext,
    x3: &TomographyPoint,
    x2: &TomographyPoint,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    (&ctx.quantizer(x3)? * &ctx.quantizer(x2)?).trace_product(&ctx.dequantizer(x1)?)
}

/// K^d(x3, x2, x1) = Tr(U(x3) U(x2) D(x1)).
pub fn dual_kernel_numeric(
    ctx: &SpinContext,
    x3: &TomographyPoint,
    x2: &TomographyPoint,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    (&ctx.dequantizer(x3)? * &ctx.dequantizer(x2)?).trace_product(&ctx.quantizer(x1)?)
}

/// Qubit Tr(D(x2) U(x1)) = 1/2 + 6 m1 m2 (n1·n2).
pub fn delta_kernel_qubit(m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> f64 {
    0.5 + 6.0 * m1 * m2 * n1.dot(n2)
}

/// Qutrit Tr(D(x2) U(x1)).
pub fn delta_kernel_qutrit(m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> f64 {
    let d = n1.dot(n2);
    1.0 / 3.0 + 1.5 * m1 * m2 * d + 5.0 / 12.0 * q(m1) * q(m2) * (3.0 * d * d - 1.0)
}

fn q(m: f64) -> f64 {
    3.0 * m * m - 2.0
}

struct QubitCoefficients {
    c0: f64,
    c12: f64,
    c23: f64,
    c31: f64,
    triple: f64,
}

const QUBIT_STAR: QubitCoefficients = QubitCoefficients { c0: 0.25, c12: 3.0, c23: 9.0, c31: 3.0, triple: 18.0 };
const QUBIT_DUAL: QubitCoefficients = QubitCoefficients { c0: 0.25, c12: 3.0, c23: 1.0, c31: 3.0, triple: 6.0 };

#[allow(clippy::too_many_arguments)]
fn qubit_kernel(
    c: &QubitCoefficients,
    m3: f64,
    n3: &AxisVector,
    m2: f64,
    n2: &AxisVector,
    m1: f64,
    n1: &AxisVector,
) -> Complex64 {
    let re = c.c0 + c.c12 * m1 * m2 * n1.dot(n2) + c.c23 * m2 * m3 * n2.dot(n3) + c.c31 * m1 * m3 * n3.dot(n1);
    let im = c.triple * m1 * m2 * m3 * triple_product(n1, n2, n3);
    Complex64::new(re, im)
}

pub fn star_kernel_qubit(m3: f64, n3: &AxisVector, m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> Complex64 {
    qubit_kernel(&QUBIT_STAR, m3, n3, m2, n2, m1, n1)
}

pub fn dual_kernel_qubit(m3: f64, n3: &AxisVector, m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> Complex64 {
    qubit_kernel(&QUBIT_DUAL, m3, n3, m2, n2, m1, n1)
}

/// Coefficients of the fifteen term families of the qutrit kernels, in
/// the printed order.
struct QutritCoefficients {
    c0: f64,
    c12: f64,
    c23: f64,
    c31: f64,
    triple: f64,
    q12: f64,
    q23: f64,
    q31: f64,
    r1: f64,
    r2: f64,
    r3: f64,
    t1: f64,
    t2: f64,
    t3: f64,
    qqq: f64,
}

const QUTRIT_STAR: QutritCoefficients = QutritCoefficients {
    c0: 1.0 / 9.0,
    c12: 0.5,
    c23: 1.5,
    c31: 0.5,
    triple: 9.0 / 8.0,
    q12: 5.0 / 36.0,
    q23: 25.0 / 36.0,
    q31: 5.0 / 36.0,
    r1: 3.0 / 8.0,
    r2: 5.0 / 8.0,
    r3: 5.0 / 8.0,
    t1: 25.0 / 8.0,
    t2: 15.0 / 8.0,
    t3: 15.0 / 8.0,
    qqq: 25.0 / 72.0,
};

const QUTRIT_DUAL: QutritCoefficients = QutritCoefficients {
    c0: 1.0 / 9.0,
    c12: 0.5,
    c23: 1.0 / 6.0,
    c31: 0.5,
    triple: 3.0 / 8.0,
    q12: 5.0 / 36.0,
    q23: 1.0 / 36.0,
    q31: 5.0 / 36.0,
    r1: 5.0 / 24.0,
    r2: 1.0 / 8.0,
    r3: 1.0 / 8.0,
    t1: 3.0 / 8.0,
    t2: 5.0 / 8.0,
    t3: 5.0 / 8.0,
    qqq: 5.0 / 72.0,
};

#[allow(clippy::too_many_arguments)]
fn qutrit_kernel(
    c: &QutritCoefficients,
    m3: f64,
    n3: &AxisVector,
    m2: f64,
    n2: &AxisVector,
    m1: f64,
    n1: &AxisVector,
) -> Complex64 {
    let (d12, d23, d31) = (n1.dot(n2), n2.dot(n3), n3.dot(n1));
    let d13 = d31;
    let d21 = d12;
    let d32 = d23;
    let t = triple_product(n1, n2, n3);
    let (q1, q2, q3) = (q(m1), q(m2), q(m3));
    let braces = 3.0 * d12 * dot(n1.cross(n3), n2.cross(n3))
        + 3.0 * d23 * dot(n2.cross(n1), n3.cross(n1))
        + 3.0 * d31 * dot(n3.cross(n2), n1.cross(n2))
        - 2.0;
    let re = c.c0
        + c.c12 * m1 * m2 * d12
        + c.c23 * m2 * m3 * d23
        + c.c31 * m1 * m3 * d31
        + c.q12 * q1 * q2 * (3.0 * d12 * d12 - 1.0)
        + c.q23 * q2 * q3 * (3.0 * d23 * d23 - 1.0)
        + c.q31 * q1 * q3 * (3.0 * d31 * d31 - 1.0)
        + c.r1 * q1 * m2 * m3 * (3.0 * d12 * d13 - d23)
        + c.r2 * m1 * q2 * m3 * (3.0 * d23 * d21 - d31)
        + c.r3 * m1 * m2 * q3 * (3.0 * d31 * d32 - d12)
        + c.qqq * q1 * q2 * q3 * braces;
    let im = c.triple * m1 * m2 * m3 * t
        + c.t1 * m1 * q2 * q3 * d23 * t
        + c.t2 * q1 * m2 * q3 * d31 * t
        + c.t3 * q1 * q2 * m3 * d12 * t;
    Complex64::new(re, im)
}

pub fn star_kernel_qutrit(m3: f64, n3: &AxisVector, m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> Complex64 {
    qutrit_kernel(&QUTRIT_STAR, m3, n3, m2, n2, m1, n1)
}

pub fn dual_kernel_qutrit(m3: f64, n3: &AxisVector, m2: f64, n2: &AxisVector, m1: f64, n1: &AxisVector) -> Complex64 {
    qutrit_kernel(&QUTRIT_DUAL, m3, n3, m2, n2, m1, n1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Delta,
    Star,
    Dual,
}

/// Evaluate a kernel from its trace definition. The delta kernel ignores x3.
pub fn kernel_numeric(
    ctx: &SpinContext,
    kind: KernelKind,
    x3: &TomographyPoint,
    x2: &TomographyPoint,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    match kind {
        KernelKind::Delta => delta_kernel_numeric(ctx, x2, x1),
        KernelKind::Star => star_kernel_numeric(ctx, x3, x2, x1),
        KernelKind::Dual => dual_kernel_numeric(ctx, x3, x2, x1),
    }
}

/// Evaluate a kernel from the qubit or qutrit closed form.
pub fn kernel_closed(
    j: HalfInt,
    kind: KernelKind,
    x3: &TomographyPoint,
    x2: &TomographyPoint,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    for x in [x3, x2, x1] {
        x.check(j)?;
    }
    let (m3, n3) = (x3.m.value(), axis_vector(x3.angles));
    let (m2, n2) = (x2.m.value(), axis_vector(x2.angles));
    let (m1, n1) = (x1.m.value(), axis_vector(x1.angles));
    let real = |v: f64| Complex64::new(v, 0.0);
    match (j.twice(), kind) {
        (1, KernelKind::Delta) => Ok(real(delta_kernel_qubit(m2, &n2, m1, &n1))),
        (1, KernelKind::Star) => Ok(star_kernel_qubit(m3, &n3, m2, &n2, m1, &n1)),
        (1, KernelKind::Dual) => Ok(dual_kernel_qubit(m3, &n3, m2, &n2, m1, &n1)),
        (2, KernelKind::Delta) => Ok(real(delta_kernel_qutrit(m2, &n2, m1, &n1))),
        (2, KernelKind::Star) => Ok(star_kernel_qutrit(m3, &n3, m2, &n2, m1, &n1)),
        (2, KernelKind::Dual) => Ok(dual_kernel_qutrit(m3, &n3, m2, &n2, m1, &n1)),
        _ => Err(Error::Unsupported(format!("closed-form kernels exist only for j = 1/2 and 1, got j = {j}"))),
    }
}

/// Symbol values sampled on a quadrature grid, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSamples {
    grid: QuadratureGrid,
    values: Vec<Complex64>,
}

impl SymbolSamples {
    pub fn new(grid: QuadratureGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} samples for a grid of {}", values.len(), grid.len())));
        }
        Ok(SymbolSamples { grid, values })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn check_grid(ctx: &SpinContext, grid: &QuadratureGrid) -> Result<()> {
    if grid.j() != ctx.j() {
        return Err(Error::GridMismatch(format!("grid for j = {} used with j = {}", grid.j(), ctx.j())));
    }
    Ok(())
}

fn sample_with(
    ctx: &SpinContext,
    grid: &QuadratureGrid,
    f: impl Fn(&TomographyPoint) -> Result<Complex64> + Sync,
) -> Result<SymbolSamples> {
    check_grid(ctx, grid)?;
    let values = (0..grid.len()).into_par_iter().map(|i| f(&grid.node(i).0)).collect::<Result<Vec<_>>>()?;
    SymbolSamples::new(grid.clone(), values)
}

pub fn sample_symbol(ctx: &SpinContext, a: &ComplexMatrix, grid: &QuadratureGrid) -> Result<SymbolSamples> {
    sample_with(ctx, grid, |x| symbol(ctx, a, x))
}

pub fn sample_dual_symbol(ctx: &SpinContext, b: &ComplexMatrix, grid: &QuadratureGrid) -> Result<SymbolSamples> {
    sample_with(ctx, grid, |x| dual_symbol(ctx, b, x))
}

/// Largest spin for which [`star_product`] runs without opting in.
pub const STAR_PRODUCT_DEFAULT_MAX_TWICE_J: i32 = 2;

/// (f_A * f_B)(x1) = ∫∫ f_A(x3) f_B(x2) K(x3, x2, x1) dx2 dx3 as a double
/// quadrature over the common grid. Restricted to j <= 1.
pub fn star_product(
    ctx: &SpinContext,
    fa: &SymbolSamples,
    fb: &SymbolSamples,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    if ctx.j().twice() > STAR_PRODUCT_DEFAULT_MAX_TWICE_J {
        return Err(Error::Unsupported(format!(
            "double-quadrature star product is limited to j <= 1 (got {}); use star_product_unrestricted",
            ctx.j()
        )));
    }
    star_product_unrestricted(ctx, fa, fb, x1)
}

/// [`star_product`] without the spin limit; cost grows as the grid size squared.
pub fn star_product_unrestricted(
    ctx: &SpinContext,
    fa: &SymbolSamples,
    fb: &SymbolSamples,
    x1: &TomographyPoint,
) -> Result<Complex64> {
    let prepared = PreparedStar::new(ctx, fa, fb)?;
    prepared.at(ctx, x1)
}

/// Weighted quantizers on the shared grid, reused across evaluation points.
struct PreparedStar {
    weighted_a: Vec<(Complex64, ComplexMatrix)>,
    weighted_b: Vec<(Complex64, ComplexMatrix)>,
}

impl PreparedStar {
    fn new(ctx: &SpinContext, fa: &SymbolSamples, fb: &SymbolSamples) -> Result<Self> {
        if fa.grid != fb.grid {
            return Err(Error::GridMismatch("symbols sampled on different grids".into()));
        }
        check_grid(ctx, &fa.grid)?;
        let grid = &fa.grid;
        let quantizers: Vec<(f64, ComplexMatrix)> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let (x, w) = grid.node(i);
                ctx.quantizer(&x).map(|d| (w, d))
            })
            .collect::<Result<_>>()?;
        let pair = |f: &SymbolSamples| -> Vec<(Complex64, ComplexMatrix)> {
            quantizers.iter().zip(&f.values).map(|((w, d), v)| (v * w, d.clone())).collect()
        };
        Ok(PreparedStar { weighted_a: pair(fa), weighted_b: pair(fb) })
    }

    fn at(&self, ctx: &SpinContext, x1: &TomographyPoint) -> Result<Complex64> {
        let u1 = ctx.dequantizer(x1)?;
        // D(x2) U(x1) for every x2, then the x3 sum of Tr(D(x3) · that)
        let inner: Vec<(Complex64, ComplexMatrix)> =
            self.weighted_b.iter().map(|(c, d2)| (*c, d2 * &u1)).collect();
        let rows: Vec<Complex64> = self
            .weighted_a
            .par_iter()
            .map(|(ca, d3)| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (cb, m) in &inner {
                    acc += cb * d3.trace_product(m).expect("same dimension");
                }
                ca * acc
            })
            .collect();
        Ok(rows.into_iter().sum())
    }
}

/// f_A * f_B at every node of the shared grid.
pub fn star_product_samples(ctx: &SpinContext, fa: &SymbolSamples, fb: &SymbolSamples) -> Result<SymbolSamples> {
    if ctx.j().twice() > STAR_PRODUCT_DEFAULT_MAX_TWICE_J {
        return Err(Error::Unsupported(format!("double-quadrature star product is limited to j <= 1 (got {})", ctx.j())));
    }
    let prepared = PreparedStar::new(ctx, fa, fb)?;
    let values = fa.grid.nodes().map(|(x, _)| prepared.at(ctx, &x)).collect::<Result<Vec<_>>>()?;
    SymbolSamples::new(fa.grid.clone(), values)
}

/// ∫ K(x3, x2, x1) dx3 by quadrature over x3.
pub fn marginalize_kernel(
    ctx: &SpinContext,
    x2: &TomographyPoint,
    x1: &TomographyPoint,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    check_grid(ctx, grid)?;
    let tail = &ctx.quantizer(x2)? * &ctx.dequantizer(x1)?;
    let parts = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x3, w) = grid.node(i);
            Ok(ctx.quantizer(&x3)?.trace_product(&tail)? * w)
        })
        .collect::<Result<Vec<Complex64>>>()?;
    Ok(parts.into_iter().sum())
}
