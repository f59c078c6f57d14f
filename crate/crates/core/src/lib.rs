//! Harmonic analysis on periodic grids.
//!
//! The crate realizes a small family of Fourier-multiplier operators on an
//! `n`-dimensional torus: imaginary powers of the Laplacian, Riesz potentials,
//! spherical means of real order and their maximal functions, together with
//! the variable-exponent Lebesgue norms used to measure them. The scalar
//! machinery behind the spherical means (the Bessel symbol, its Gaussian
//! split and the Mellin coefficients of the remainder) lives in [`mellin`],
//! and [`wave`] builds the wave and Darboux propagators on top of it.

pub mod error;
pub mod grid;
pub mod mellin;
pub mod operators;
pub mod specfun;
pub mod varlp;
pub mod wave;

pub use error::{Error, Result};
pub use grid::{Geometry, GridFunction};
pub use mellin::MultiplierSpec;
pub use num_complex::Complex64;
pub use varlp::VariableExponent;

/// Toolkit version recorded in exported files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
