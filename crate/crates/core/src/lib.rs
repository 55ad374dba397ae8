//! Spin (qudit) tomography.
//!
//! Dequantizer and quantizer operators for spin-j systems, tomogram
//! sampling and density-matrix reconstruction on an exact quadrature grid,
//! and the star-product kernels for ordinary and dual tomographic symbols,
//! with closed-form qubit and qutrit kernels.

pub mod cli;
pub mod error;
pub mod figure;
pub mod golden;
pub mod halfint;
pub mod kernels;
pub mod matrix;
pub mod random;
pub mod spin_ops;
pub mod su2;
pub mod tomography;
pub mod verify;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use matrix::{ComplexMatrix, DensityMatrix};
pub use su2::EulerAngles;
pub use tomography::{QuadratureGrid, SpinContext, Tomogram, TomographyPoint};
