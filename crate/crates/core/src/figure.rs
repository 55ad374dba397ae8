//! Pure-state tomogram grids w_{jμ}(m, β) with their large-j approximation.

use std::f64::consts::PI;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::tomography::{asymptotic_tomogram, pure_state_tomogram};

pub const DEFAULT_BETA_POINTS: usize = 181;

/// Largest 2j accepted for figure data (101 dimensions).
pub const MAX_TWICE_J: i32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub two_j: i32,
    pub two_mu: i32,
    pub two_m: i32,
    pub beta: f64,
    pub exact: f64,
    /// NaN where the approximation is singular (β = 0, π).
    pub asymptotic: f64,
}

/// μ = j, roughly j/2, and the smallest |μ|: (50, 25, 0) for j = 50.
pub fn figure_states(j: HalfInt) -> Vec<HalfInt> {
    let tj = j.twice();
    let mut mus = vec![tj, 2 * (tj / 4) + tj % 2, tj % 2];
    mus.dedup();
    mus.into_iter().map(HalfInt::from_twice).collect()
}

pub fn beta_grid(points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        n => (0..n).map(|i| if i + 1 == n { PI } else { PI * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// Rows for every (μ, β, m), with μ from [`figure_states`], β uniform on
/// [0, π] and m descending.
pub fn figure_data(j: HalfInt, beta_points: usize) -> Result<Vec<FigureRow>> {
    if j.twice() < 1 || j.twice() > MAX_TWICE_J {
        return Err(Error::Unsupported(format!("figure data needs 1/2 <= j <= {}", MAX_TWICE_J / 2)));
    }
    if beta_points < 2 {
        return Err(Error::Unsupported("at least two beta points are needed".into()));
    }
    let betas = beta_grid(beta_points);
    let slices: Vec<(HalfInt, f64)> =
        figure_states(j).into_iter().flat_map(|mu| betas.iter().map(move |&b| (mu, b))).collect();
    let blocks = slices
        .par_iter()
        .map(|&(mu, beta)| slice(j, mu, beta))
        .collect::<Result<Vec<Vec<FigureRow>>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

fn slice(j: HalfInt, mu: HalfInt, beta: f64) -> Result<Vec<FigureRow>> {
    j.projections()
        .map(|m| {
            let exact = pure_state_tomogram(j, mu, m, beta)?;
            let asymptotic = match asymptotic_tomogram(j, mu, m.value(), beta) {
                Ok(v) => v,
                Err(Error::Singularity { .. }) => f64::NAN,
                Err(e) => return Err(e),
            };
            let singular = beta == 0.0 || beta == PI;
            if !exact.is_finite() || (!singular && !asymptotic.is_finite()) {
                return Err(Error::NonFinite(format!("tomogram at mu = {mu}, m = {m}, beta = {beta}")));
            }
            Ok(FigureRow { two_j: j.twice(), two_mu: mu.twice(), two_m: m.twice(), beta, exact, asymptotic })
        })
        .collect()
}

/// Largest |Σ_m w(m, β) - 1| over the (μ, β) slices.
pub fn slice_sum_error(rows: &[FigureRow]) -> f64 {
    let mut sums: Vec<((i32, u64), f64)> = Vec::new();
    for r in rows {
        let key = (r.two_mu, r.beta.to_bits());
        match sums.last_mut() {
            Some((k, s)) if *k == key => *s += r.exact,
            _ => sums.push((key, r.exact)),
        }
    }
    sums.iter().map(|(_, s)| (s - 1.0).abs()).fold(0.0, f64::max)
}

/// Projections maximizing the exact and the asymptotic tomogram at β.
pub fn argmax_pair(j: HalfInt, mu: HalfInt, beta: f64) -> Result<(HalfInt, HalfInt)> {
    let mut best_exact = (j, f64::NEG_INFINITY);
    let mut best_asym = (j, f64::NEG_INFINITY);
    for m in j.projections() {
        let e = pure_state_tomogram(j, mu, m, beta)?;
        let a = asymptotic_tomogram(j, mu, m.value(), beta)?;
        if e > best_exact.1 {
            best_exact = (m, e);
        }
        if a > best_asym.1 {
            best_asym = (m, a);
        }
    }
    Ok((best_exact.0, best_asym.0))
}

pub fn write_figure_csv<W: Write>(rows: &[FigureRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_figure_csv<R: Read>(input: R) -> Result<Vec<FigureRow>> {
    let mut reader = csv::Reader::from_reader(input);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}
