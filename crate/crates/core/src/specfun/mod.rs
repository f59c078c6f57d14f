//! Special functions behind the multiplier and Mellin formulas.
//!
//! All functions are pure; poles and out-of-domain arguments come back as
//! [`Error`](crate::Error) values instead of infinities.

mod bessel;
mod gamma;

pub use bessel::{bessel_j, bessel_j_scaled};
pub use gamma::{gamma, gamma_real, ln_gamma_real, log_gamma, polygamma};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Complex numbers used for Gamma arguments and Mellin coefficients.
pub type ComplexValue = num_complex::Complex64;
