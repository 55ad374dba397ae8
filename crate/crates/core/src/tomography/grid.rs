use std::f64::consts::{PI, TAU};
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{tomogram_value_with, OperatorTable, TomographyPoint};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::matrix::{ComplexMatrix, DensityMatrix, StateDiagnostics};
use crate::spin_ops::{rotation_matrix, sl_basis};
use crate::su2::EulerAngles;

/// Gauss–Legendre nodes and weights on [-1, 1], nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let dp = legendre_with_derivative(n, x).1;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) from the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule over (m, β, α, γ): Gauss–Legendre in cos β, uniform in α
/// and γ, with weights normalized so that the constant 1 integrates to 2j+1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    j: HalfInt,
    oversample: usize,
    beta: Vec<f64>,
    beta_weights: Vec<f64>,
    n_alpha: usize,
    n_gamma: usize,
}

/// Exact grid for integrands of harmonic degree <= 4j, optionally refined.
pub fn make_grid(j: HalfInt, oversample: usize) -> Result<QuadratureGrid> {
    if j.twice() < 0 {
        return Err(Error::Label(format!("negative spin {j}")));
    }
    if oversample == 0 {
        return Err(Error::Unsupported("oversample must be at least 1".into()));
    }
    let tj = j.twice() as usize;
    let n_beta = oversample * (tj + 1) + 1;
    let n_uniform = oversample * (2 * tj + 1) + 1;
    let (nodes, weights) = gauss_legendre(n_beta);
    // descending cos β gives ascending β
    let beta = nodes.iter().rev().map(|t| t.clamp(-1.0, 1.0).acos()).collect();
    let beta_weights = weights.into_iter().rev().collect();
    Ok(QuadratureGrid { j, oversample, beta, beta_weights, n_alpha: n_uniform, n_gamma: n_uniform })
}

impl QuadratureGrid {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn oversample(&self) -> usize {
        self.oversample
    }

    pub fn n_beta(&self) -> usize {
        self.beta.len()
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    pub fn n_gamma(&self) -> usize {
        self.n_gamma
    }

    /// Number of (β, α, γ) nodes.
    pub fn angle_count(&self) -> usize {
        self.beta.len() * self.n_alpha * self.n_gamma
    }

    /// Number of (m, β, α, γ) nodes.
    pub fn len(&self) -> usize {
        self.j.dim() * self.angle_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Angles and weight of the angle node with flat index (β, α, γ).
    pub fn angle_node(&self, index: usize) -> (EulerAngles, f64) {
        let ig = index % self.n_gamma;
        let ia = (index / self.n_gamma) % self.n_alpha;
        let ib = index / (self.n_gamma * self.n_alpha);
        let alpha = TAU * ia as f64 / self.n_alpha as f64;
        let gamma = TAU * ig as f64 / self.n_gamma as f64;
        let angles = EulerAngles { alpha, beta: self.beta[ib], gamma };
        let w = self.beta_weights[ib] / (2.0 * (self.n_alpha * self.n_gamma) as f64);
        (angles, w)
    }

    /// Point and weight at flat index ((m, β), α, γ), m descending.
    pub fn node(&self, index: usize) -> (TomographyPoint, f64) {
        let per_m = self.angle_count();
        let m = self.j.projection_at(index / per_m);
        let (angles, w) = self.angle_node(index % per_m);
        (TomographyPoint { m, angles }, w)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (TomographyPoint, f64)> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }

    /// ∫ f(x) dx, evaluated in parallel with an ordered reduction.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(&TomographyPoint) -> Complex64 + Sync,
    {
        let parts: Vec<Complex64> = (0..self.len())
            .into_par_iter()
            .map(|i| {
                let (x, w) = self.node(i);
                f(&x) * w
            })
            .collect();
        parts.into_iter().sum()
    }
}

/// Which operator family multiplies the samples in [`integrate_operator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Dequantizer,
    Quantizer,
}

/// ∫ f(x) D(x) dx (or with U(x)) for samples f in grid order.
pub fn integrate_operator(
    grid: &QuadratureGrid,
    samples: &[Complex64],
    table: &OperatorTable,
    family: Family,
) -> Result<ComplexMatrix> {
    if samples.len() != grid.len() {
        return Err(Error::GridMismatch(format!("{} samples for a grid of {}", samples.len(), grid.len())));
    }
    if table.j() != grid.j() {
        return Err(Error::GridMismatch(format!("operators for j = {} on a grid for j = {}", table.j(), grid.j())));
    }
    let j = grid.j();
    let per_m = grid.angle_count();
    let parts: Vec<ComplexMatrix> = (0..per_m)
        .into_par_iter()
        .map(|a| {
            let (angles, w) = grid.angle_node(a);
            let u = rotation_matrix(j, angles);
            let mut acc = ComplexMatrix::zeros(j.dim());
            for (im, m) in j.projections().enumerate() {
                let f = samples[im * per_m + a];
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let op = match family {
                    Family::Dequantizer => table.dequantizer(&u, m),
                    Family::Quantizer => table.quantizer(&u, m),
                };
                acc.add_scaled(f * w, &op);
            }
            acc
        })
        .collect();
    let mut total = ComplexMatrix::zeros(j.dim());
    for p in &parts {
        total = &total + p;
    }
    Ok(total)
}

/// Tomogram values on a grid, stored in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tomogram {
    grid: QuadratureGrid,
    values: Vec<f64>,
}

impl Tomogram {
    pub fn new(grid: QuadratureGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for a grid of {}", values.len(), grid.len())));
        }
        Ok(Tomogram { grid, values })
    }

    pub fn j(&self) -> HalfInt {
        self.grid.j()
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest |Σ_m w(m, angles) - 1| over angle nodes.
    pub fn projection_sum_error(&self) -> f64 {
        let per_m = self.grid.angle_count();
        (0..per_m)
            .map(|a| {
                let s: f64 = (0..self.j().dim()).map(|im| self.values[im * per_m + a]).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// |∫ w dx - 1|.
    pub fn integral_error(&self) -> f64 {
        let total: f64 = self.grid.nodes().zip(&self.values).map(|((_, w), v)| w * v).sum();
        (total - 1.0).abs()
    }

    /// Smallest and largest sample.
    pub fn value_range(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// w(x) = Tr(ρ U(x)) at every grid node.
pub fn sample_tomogram(rho: &DensityMatrix, grid: &QuadratureGrid) -> Result<Tomogram> {
    let j = grid.j();
    if rho.dim() != j.dim() {
        return Err(Error::DimensionMismatch { expected: j.dim(), got: rho.dim() });
    }
    let per_m = grid.angle_count();
    let columns: Vec<Vec<f64>> = (0..per_m)
        .into_par_iter()
        .map(|a| {
            let u = rotation_matrix(j, grid.angle_node(a).0);
            j.projections().map(|m| tomogram_value_with(rho.matrix(), &u, j, m)).collect()
        })
        .collect();
    let mut values = vec![0.0; grid.len()];
    for (a, col) in columns.iter().enumerate() {
        for (im, &v) in col.iter().enumerate() {
            values[im * per_m + a] = v;
        }
    }
    Tomogram::new(grid.clone(), values)
}

/// ∫ w(x) D(x) dx without validating the result as a state.
pub fn reconstruct_operator(w: &Tomogram, table: &OperatorTable) -> Result<ComplexMatrix> {
    let samples: Vec<Complex64> = w.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    integrate_operator(&w.grid, &samples, table, Family::Quantizer)
}

/// ρ = ∫ w(x) D(x) dx, validated as a density matrix.
pub fn reconstruct(w: &Tomogram) -> Result<DensityMatrix> {
    let table = OperatorTable::new(&sl_basis(w.j())?);
    let rho = reconstruct_operator(w, &table)?;
    let diag = StateDiagnostics::of(&rho).map_err(|e| Error::Reconstruction(e.to_string()))?;
    diag.check().map_err(|e| {
        Error::Reconstruction(format!(
            "{e} (hermitian deviation {:e}, trace error {:e}, min eigenvalue {:e})",
            diag.hermitian_deviation, diag.trace_error, diag.min_eigenvalue
        ))
    })?;
    DensityMatrix::new(rho).map_err(|e| Error::Reconstruction(e.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    two_m: i32,
    alpha: f64,
    beta: f64,
    gamma: f64,
    weight: f64,
    value: f64,
}

pub fn write_tomogram_csv<W: Write>(w: &Tomogram, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for ((x, weight), &value) in w.grid.nodes().zip(&w.values) {
        writer.serialize(Row {
            two_m: x.m.twice(),
            alpha: x.angles.alpha,
            beta: x.angles.beta,
            gamma: x.angles.gamma,
            weight,
            value,
        })?;
    }
    writer.flush()?;
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Read a tomogram written by [`write_tomogram_csv`] for spin j. The grid is
/// rebuilt from the row count and every row is checked against it.
pub fn read_tomogram_csv<R: Read>(input: R, j: HalfInt) -> Result<Tomogram> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    let expected = ["two_m", "alpha", "beta", "gamma", "weight", "value"];
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>())));
    }
    let rows: Vec<Row> = reader.deserialize().collect::<std::result::Result<_, _>>()?;
    let mut grid = None;
    for os in 1..=64 {
        let g = make_grid(j, os)?;
        if g.len() >= rows.len() {
            grid = (g.len() == rows.len()).then_some(g);
            break;
        }
    }
    let grid =
        grid.ok_or_else(|| Error::GridMismatch(format!("{} rows do not form a grid for j = {j}", rows.len())))?;
    let mut values = Vec::with_capacity(rows.len());
    for (i, (row, (x, weight))) in rows.iter().zip(grid.nodes()).enumerate() {
        let matches = row.two_m == x.m.twice()
            && close(row.alpha, x.angles.alpha)
            && close(row.beta, x.angles.beta)
            && close(row.gamma, x.angles.gamma)
            && close(row.weight, weight);
        if !matches {
            return Err(Error::GridMismatch(format!("row {} does not match the expected grid node", i + 1)));
        }
        if !row.value.is_finite() {
            return Err(Error::Parse(format!("row {}: non-finite value", i + 1)));
        }
        values.push(row.value);
    }
    Tomogram::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_pure_state, seeded};
    use crate::spin_ops::projector;
    use crate::su2::wigner_d;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn gauss_legendre_moments() {
        for n in 1..=24 {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for k in 0..2 * n {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} k={k}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn grid_sizes_and_measure() {
        for tj in 0..=5 {
            for os in 1..=2 {
                let g = make_grid(h(tj), os).unwrap();
                let tj = tj as usize;
                assert_eq!(g.n_beta(), os * (tj + 1) + 1);
                assert_eq!(g.n_alpha(), os * (2 * tj + 1) + 1);
                assert_eq!(g.len(), (tj + 1) * g.angle_count());
                let total = g.integrate(|_| Complex64::new(1.0, 0.0));
                assert!((total.re - (tj + 1) as f64).abs() < 1e-12);
                assert!(g.nodes().all(|(_, w)| w > 0.0));
            }
        }
        assert!(make_grid(h(1), 0).is_err());
    }

    #[test]
    fn d_function_integrates_to_zero() {
        let g = make_grid(h(2), 1).unwrap();
        let v = g.integrate(|x| wigner_d(h(2), h(0), h(0), x.angles));
        assert!(v.norm() < 1e-14);
        let v = g.integrate(|x| wigner_d(h(2), h(2), h(-2), x.angles));
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn tomogram_normalization_on_grid() {
        let mut rng = seeded(41);
        for tj in 1..=5 {
            let j = h(tj);
            let rho = random_density_matrix(&mut rng, j.dim());
            let t = sample_tomogram(&rho, &make_grid(j, 1).unwrap()).unwrap();
            assert!(t.projection_sum_error() < 1e-13);
            assert!(t.integral_error() < 1e-13);
            let (lo, hi) = t.value_range();
            assert!(lo > -1e-12 && hi < 1.0 + 1e-12);
        }
    }

    #[test]
    fn round_trip_reconstruction() {
        let mut rng = seeded(43);
        for tj in 1..=5 {
            let j = h(tj);
            let grid = make_grid(j, 1).unwrap();
            for _ in 0..3 {
                let rho = random_density_matrix(&mut rng, j.dim());
                let back = reconstruct(&sample_tomogram(&rho, &grid).unwrap()).unwrap();
                let err = (back.matrix() - rho.matrix()).frobenius_norm();
                assert!(err < 1e-10, "j={j}: {err:e}");
            }
        }
    }

    #[test]
    fn reconstruction_of_special_states() {
        for tj in 1..=4 {
            let j = h(tj);
            let grid = make_grid(j, 1).unwrap();
            let flat = Tomogram::new(grid.clone(), vec![1.0 / j.dim() as f64; grid.len()]).unwrap();
            let mixed = reconstruct(&flat).unwrap();
            assert!(mixed.matrix().max_abs_diff(DensityMatrix::maximally_mixed(j.dim()).matrix()).unwrap() < 1e-12);
            for mu in j.projections() {
                let p = DensityMatrix::new(projector(j, mu).unwrap()).unwrap();
                let back = reconstruct(&sample_tomogram(&p, &grid).unwrap()).unwrap();
                assert!(back.matrix().max_abs_diff(p.matrix()).unwrap() < 1e-11);
            }
        }
    }

    #[test]
    fn oversampled_grid_also_reconstructs() {
        let mut rng = seeded(47);
        let j = h(3);
        let rho = random_pure_state(&mut rng, j.dim());
        let back = reconstruct(&sample_tomogram(&rho, &make_grid(j, 2).unwrap()).unwrap()).unwrap();
        assert!((back.matrix() - rho.matrix()).frobenius_norm() < 1e-10);
    }

    #[test]
    fn invalid_tomogram_is_rejected() {
        let j = h(1);
        let grid = make_grid(j, 1).unwrap();
        // Bloch vector of length 2 along z
        let values: Vec<f64> = grid.nodes().map(|(x, _)| 0.5 + 2.0 * x.m.value() * x.angles.beta.cos()).collect();
        let err = reconstruct(&Tomogram::new(grid.clone(), values).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Reconstruction(_)));
        assert!(Tomogram::new(grid, vec![0.5; 3]).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut rng = seeded(53);
        let j = h(2);
        let rho = random_density_matrix(&mut rng, j.dim());
        let t = sample_tomogram(&rho, &make_grid(j, 1).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_tomogram_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("two_m,alpha,beta,gamma,weight,value\n"));
        assert_eq!(text.lines().count(), t.grid().len() + 1);
        let back = read_tomogram_csv(buf.as_slice(), j).unwrap();
        assert_eq!(back, t);
        assert!(matches!(read_tomogram_csv(buf.as_slice(), h(1)), Err(Error::GridMismatch(_))));
        let truncated: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(read_tomogram_csv(truncated.as_bytes(), j).is_err());
        assert!(read_tomogram_csv("a,b\n1,2\n".as_bytes(), j).is_err());
    }
}
