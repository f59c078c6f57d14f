use serde::Serialize;

use super::VariableExponent;
use crate::error::{Error, Result};

/// Splits `1/p = (1−θ)/2 + θ/p̃`, with `p̃` an exponent strictly between 1 and ∞.
#[derive(Clone, Debug)]
pub struct ExponentTransform {
    pub theta: f64,
    pub theta0: f64,
    pub delta: f64,
    /// `r(x) = 1/p(x) − 1/2`.
    pub r: Vec<f64>,
    pub p_tilde: VariableExponent,
    pub alpha: f64,
    pub n: usize,
}

/// Scalar summary of an [`ExponentTransform`], for reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformSummary {
    pub theta: f64,
    pub theta0: f64,
    pub delta: f64,
    pub p_tilde_minus: f64,
    pub p_tilde_plus: f64,
}

impl ExponentTransform {
    /// Upper limit `1 − 2/n + 2α/n` for `θ`.
    pub fn theta_bound(&self) -> f64 {
        theta_bound(self.alpha, self.n)
    }

    /// `max_x |1/p(x) − (1−θ)/2 − θ/p̃(x)|`.
    pub fn identity_residual(&self, p: &VariableExponent) -> f64 {
        p.samples()
            .iter()
            .zip(self.p_tilde.samples())
            .map(|(q, qt)| (1.0 / q - (0.5 * (1.0 - self.theta) + self.theta / qt)).abs())
            .fold(0.0, f64::max)
    }

    /// `max_x |r(x)| / θ`, which stays below 1/2.
    pub fn max_scaled_r(&self) -> f64 {
        self.r.iter().map(|r| r.abs() / self.theta).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> TransformSummary {
        TransformSummary {
            theta: self.theta,
            theta0: self.theta0,
            delta: self.delta,
            p_tilde_minus: self.p_tilde.p_minus(),
            p_tilde_plus: self.p_tilde.p_plus(),
        }
    }
}

fn theta_bound(alpha: f64, n: usize) -> f64 {
    let n = n as f64;
    1.0 - 2.0 / n + 2.0 * alpha / n
}

/// Builds `θ` and `p̃` for `p` with `n/(n−1+α) < p⁻ ≤ p⁺ < n/(1−α)`.
///
/// Takes `δ` as half the smaller of the two slacks of `r = 1/p − 1/2` inside
/// `(1/n − α/n − 1/2, 1/2 − 1/n + α/n)`, `θ₀ = δ` and `θ = 1 − 2/n + 2α/n − θ₀`;
/// then `1/p̃ = 1/2 + r/θ`. `p_∞` is mapped by the same rule.
pub fn exponent_transform(p: &VariableExponent, alpha: f64, n: usize) -> Result<ExponentTransform> {
    if n == 0 {
        return Err(Error::Precondition("dimension must be positive".into()));
    }
    let nf = n as f64;
    if !(alpha > 1.0 - nf / 2.0 && alpha < 1.0) {
        return Err(Error::Precondition(format!("alpha = {alpha} outside (1 - n/2, 1) = ({}, 1)", 1.0 - nf / 2.0)));
    }
    if p.has_infinite_region() {
        return Err(Error::Precondition("exponent must be finite everywhere (p+ < inf)".into()));
    }
    let lower = nf / (nf - 1.0 + alpha);
    let upper = nf / (1.0 - alpha);
    if !(lower < p.p_minus()) {
        return Err(Error::Precondition(format!("p- = {} violates n/(n-1+alpha) = {lower} < p-", p.p_minus())));
    }
    if !(p.p_plus() < upper) {
        return Err(Error::Precondition(format!("p+ = {} violates p+ < n/(1-alpha) = {upper}", p.p_plus())));
    }
    let r: Vec<f64> = p.samples().iter().map(|q| 1.0 / q - 0.5).collect();
    let r_min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let r_max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let r_lo = 1.0 / nf - alpha / nf - 0.5;
    let r_hi = 0.5 - 1.0 / nf + alpha / nf;
    let delta = 0.5 * (r_min - r_lo).min(r_hi - r_max);
    let theta0 = delta;
    let theta = theta_bound(alpha, n) - theta0;

    let tilde = |r: f64| 1.0 / (0.5 + r / theta);
    let r_inf = 1.0 / p.p_infinity() - 0.5;
    if !(r_inf.abs() < 0.5 * theta) {
        return Err(Error::Precondition(format!(
            "p_infinity = {} has no transformed value in (1, inf) for theta = {theta}",
            p.p_infinity()
        )));
    }
    let p_tilde = VariableExponent::new(p.geometry().clone(), r.iter().map(|&v| tilde(v)).collect(), tilde(r_inf))?;
    Ok(ExponentTransform { theta, theta0, delta, r, p_tilde, alpha, n })
}
