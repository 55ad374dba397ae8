//! Seeded generators for random states, operators and tomographic points.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::halfint::HalfInt;
use crate::matrix::{ComplexMatrix, DensityMatrix};
use crate::su2::EulerAngles;
use crate::tomography::TomographyPoint;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Density matrix G G† / Tr(G G†) with a complex Ginibre matrix G.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ginibre(rng, dim);
    let mut rho = &g * &g.adjoint();
    let tr = rho.trace().re;
    rho = rho.scale_real(1.0 / tr);
    // exact Hermitian symmetrization so validation sees no rounding residue
    let rho = ComplexMatrix::from_fn(dim, |r, c| 0.5 * (rho[(r, c)] + rho[(c, r)].conj()));
    DensityMatrix::new(rho).expect("Ginibre construction yields a valid state")
}

/// Pure state |ψ⟩⟨ψ| with a Gaussian random vector.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let rho = ComplexMatrix::from_fn(dim, |r, c| v[r] * v[c].conj() / norm);
    let rho = ComplexMatrix::from_fn(dim, |r, c| 0.5 * (rho[(r, c)] + rho[(c, r)].conj()));
    DensityMatrix::new(rho).expect("normalized projector is a valid state")
}

/// Hermitian (G + G†)/2.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim);
    ComplexMatrix::from_fn(dim, |r, c| 0.5 * (g[(r, c)] + g[(c, r)].conj()))
}

/// Euler angles uniform with respect to the Haar measure.
pub fn random_angles<R: Rng + ?Sized>(rng: &mut R) -> EulerAngles {
    let alpha = rng.gen_range(0.0..TAU);
    let beta = rng.gen_range(-1.0f64..=1.0).acos();
    let gamma = rng.gen_range(0.0..TAU);
    EulerAngles::new(alpha, beta, gamma).expect("sampled angles are in range")
}

pub fn random_projection<R: Rng + ?Sized>(rng: &mut R, j: HalfInt) -> HalfInt {
    j.projection_at(rng.gen_range(0..j.dim()))
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, j: HalfInt) -> TomographyPoint {
    let m = random_projection(rng, j);
    TomographyPoint { m, angles: random_angles(rng) }
}
