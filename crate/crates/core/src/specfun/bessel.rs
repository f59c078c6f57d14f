//! Bessel functions of the first kind for real order `ν ≥ −1/2`.
//!
//! Three regimes:
//!
//! * `x ≤ 12`: ascending power series,
//! * `x ≥ max(25, ν²)`: Hankel asymptotic expansion, truncated at the
//!   smallest term (it terminates exactly for half-integer orders),
//! * in between: Miller backward recurrence normalized with the Neumann sum
//!   `(x/2)^ν = Σ_k (ν+2k) Γ(ν+k)/k! J_{ν+2k}(x)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma_real;

const SERIES_LIMIT: f64 = 12.0;
const HANKEL_FLOOR: f64 = 25.0;

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || nu < -0.5 {
        return Err(Error::Domain(format!("Bessel order must be >= -1/2, got {nu}")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn hankel_threshold(nu: f64) -> f64 {
    HANKEL_FLOOR.max(nu * nu)
}

/// `J_ν(x)`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain(format!("J_{nu}(0) is unbounded")))
        };
    }
    if x <= SERIES_LIMIT {
        let prefactor = (nu * (0.5 * x).ln()).exp();
        return Ok(prefactor * scaled_series(nu, x)?);
    }
    if x >= hankel_threshold(nu) {
        return Ok(hankel(nu, x));
    }
    miller(nu, x)
}

/// `(x/2)^{−ν} J_ν(x)`, an entire function of `x` with value `1/Γ(ν+1)` at 0.
///
/// Used by the spherical-mean symbol, where `λ^{−ν}J_ν(2πλ)` must stay finite
/// as `λ → 0` for every order.
pub fn bessel_j_scaled(nu: f64, x: f64) -> Result<f64> {
    check_args(nu, x)?;
    if x <= SERIES_LIMIT {
        return scaled_series(nu, x);
    }
    let j = bessel_j(nu, x)?;
    Ok(j * (-nu * (0.5 * x).ln()).exp())
}

/// `Σ_k (−1)^k (x/2)^{2k} / (k! Γ(k+ν+1))`.
fn scaled_series(nu: f64, x: f64) -> Result<f64> {
    let q = 0.25 * x * x;
    let mut term = (-ln_gamma_real(nu + 1.0)?).exp();
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > q.sqrt() {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    Ok(sum)
}

fn hankel(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0f64;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = term * (mu - odd * odd) / (8.0 * k * x);
        if next == 0.0 || next.abs() >= term.abs() {
            break;
        }
        term = next;
        // a_k/x^k enters P with sign (−1)^{k/2} for even k, Q with (−1)^{(k−1)/2} for odd k.
        match (k as u64) % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
        k += 1.0;
    }
    // ω = x − νπ/2 − π/4, expanded so the large argument is reduced by libm.
    let phase = 0.5 * nu * PI + 0.25 * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_w = cx * cp + sx * sp;
    let sin_w = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_w - q * sin_w)
}

fn miller(nu: f64, x: f64) -> Result<f64> {
    // Starting order well past the turning point; J_{ν+M}(x) is negligible there.
    let mut m = (2.0 * x + 40.0).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let mut upper = 0.0f64; // f_{j+1}
    let mut current = 1e-30f64; // f_j, j = m
    let mut norm_sum = 0.0f64;
    // Neumann weights w_0 = Γ(ν+1), w_k = (ν+2k) Γ(ν+k)/k! for k ≥ 1.
    let gamma_nu1 = ln_gamma_real(nu + 1.0)?.exp();
    let mut weights = Vec::with_capacity(m / 2 + 1);
    weights.push(gamma_nu1);
    let mut ratio = gamma_nu1; // Γ(ν+k)/k! at k = 1
    for k in 1..=m / 2 {
        let kf = k as f64;
        weights.push((nu + 2.0 * kf) * ratio);
        ratio *= (nu + kf) / (kf + 1.0);
    }
    let mut j = m;
    loop {
        if j.is_multiple_of(2) {
            norm_sum += weights[j / 2] * current;
        }
        if j == 0 {
            break;
        }
        let order = nu + j as f64;
        let lower = 2.0 * order / x * current - upper;
        upper = current;
        current = lower;
        j -= 1;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            norm_sum *= 1e-250;
        }
    }
    let scale = (nu * (0.5 * x).ln()).exp();
    let result = current * scale / norm_sum;
    if !result.is_finite() {
        return Err(Error::Domain(format!("Bessel recurrence failed for nu={nu}, x={x}")));
    }
    Ok(result)
}
