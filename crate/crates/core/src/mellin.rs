//! Spherical-mean symbols and their Mellin coefficients.
//!
//! The symbol of the order-`α` spherical mean in `ℝⁿ` is
//! `F_α(λ) = π^{1−α} λ^{−ν} J_ν(2πλ)` with `ν = n/2 + α − 1`. Subtracting its
//! Gaussian part gives `F*_α(λ) = F_α(λ) − F_α(0) e^{−λ²}`, which vanishes at
//! the origin and has the Mellin expansion `F*_α(λ) = ∫ A_α(u) λ^{iu} du` with
//! `A_α(u) = (1/2π) ∫₀^∞ F*_α(λ) λ^{−1−iu} dλ`.
//!
//! Two closed forms are provided. [`a_alpha_closed`] is the Gamma-function
//! expression usually quoted for `A_α`; [`a_alpha_exact`] is the expression
//! obtained by evaluating the integral above term by term. They differ in the
//! phase factor (`2^{−iu}` against `π^{iu}`) and in the constant in front, and
//! only the second one inverts back to `F*_α`. The quadrature routines
//! integrate the definition directly and side with [`a_alpha_exact`].

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{bessel_j_scaled, gamma_real, log_gamma, polygamma};

/// Order `α` and dimension `n` of a spherical-mean symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiplierSpec {
    alpha: f64,
    n: usize,
}

impl MultiplierSpec {
    /// Accepts every `α` with `ν = n/2 + α − 1 ≥ −1/2`, which covers the
    /// boundedness range `1 − n/2 < α < 1` as well as the endpoint orders used
    /// by the wave propagators and the unit-mass check at `α = 1`.
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be finite, got {alpha}")));
        }
        let spec = Self { alpha, n };
        if spec.nu() < -0.5 {
            return Err(Error::Domain(format!(
                "alpha = {alpha} gives Bessel order {} < -1/2 in dimension {n}",
                spec.nu()
            )));
        }
        Ok(spec)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bessel order `ν = n/2 + α − 1`.
    pub fn nu(&self) -> f64 {
        self.n as f64 / 2.0 + self.alpha - 1.0
    }

    /// `c = α + n/2`, the decay rate of `A_α`.
    pub fn c(&self) -> f64 {
        self.alpha + self.n as f64 / 2.0
    }

    /// `1 − n/2 < α < 1`.
    pub fn in_theorem_range(&self) -> bool {
        self.alpha > 1.0 - self.n as f64 / 2.0 && self.alpha < 1.0
    }

    /// `F_α(0) = π^{n/2} / Γ(n/2 + α)`.
    pub fn f_zero(&self) -> f64 {
        f_alpha(0.0, self)
    }
}

/// `F_α(λ)`; even in `λ`, with the limit value `π^{n/2}/Γ(n/2+α)` at 0.
pub fn f_alpha(lambda: f64, spec: &MultiplierSpec) -> f64 {
    let scaled = bessel_j_scaled(spec.nu(), 2.0 * PI * lambda.abs()).unwrap_or(f64::NAN);
    PI.powf(spec.n as f64 / 2.0) * scaled
}

/// `F*_α(λ) = F_α(λ) − F_α(0) e^{−λ²}`, exactly 0 at `λ = 0`.
pub fn f_star(lambda: f64, spec: &MultiplierSpec) -> f64 {
    let lambda = lambda.abs();
    if lambda == 0.0 {
        return 0.0;
    }
    if lambda <= 1.0 {
        return f_star_series(lambda, spec);
    }
    f_alpha(lambda, spec) - spec.f_zero() * (-lambda * lambda).exp()
}

/// Term-by-term difference of the two power series, free of cancellation:
/// `π^{n/2} Σ_{k≥1} (−λ²)^k/k! · [π^{2k}/Γ(k+ν+1) − 1/Γ(ν+1)]`.
fn f_star_series(lambda: f64, spec: &MultiplierSpec) -> f64 {
    let nu = spec.nu();
    let b = 1.0 / gamma_real(nu + 1.0).unwrap_or(f64::NAN);
    let x = lambda * lambda;
    let mut a = b;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        a *= PI * PI / (kf + nu);
        power *= -x / kf;
        let term = power * (a - b);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf > PI * PI * x {
            break;
        }
    }
    PI.powf(spec.n as f64 / 2.0) * sum
}

/// Which closed form a routine should use for `A_α(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoefficientForm {
    /// [`a_alpha_closed`].
    Displayed,
    /// [`a_alpha_exact`].
    Exact,
}

/// Both closed forms read `K Γ(−iu/2) [e^{iuβ}/Γ(c+iu/2) − 1/Γ(c)]`.
struct GammaRatio {
    k: f64,
    beta: f64,
    c: f64,
}

const SERIES_CROSSOVER: f64 = 1e-3;

impl GammaRatio {
    fn eval(&self, u: f64) -> Result<Complex64> {
        if u.abs() < SERIES_CROSSOVER {
            return self.series(u);
        }
        self.direct(u)
    }

    fn direct(&self, u: f64) -> Result<Complex64> {
        let i = Complex64::i();
        let lg_eps = log_gamma(Complex64::new(0.0, -u / 2.0))?;
        let lg_shift = log_gamma(Complex64::new(self.c, u / 2.0))?;
        let lg_c = log_gamma(Complex64::new(self.c, 0.0))?;
        let first = (lg_eps + i * u * self.beta - lg_shift).exp();
        let second = (lg_eps - lg_c).exp();
        Ok(self.k * (first - second))
    }

    /// Fourth-order expansion around the removable singularity at `u = 0`.
    ///
    /// With `ε = −iu/2`, the bracket is `(e^E − 1)/Γ(c)` where
    /// `E = −2βε + ψ(c)ε − ψ'(c)ε²/2 + ψ''(c)ε³/6 − ψ'''(c)ε⁴/24`, and
    /// `Γ(ε) = Γ(1+ε)/ε` absorbs the `1/ε`.
    fn series(&self, u: f64) -> Result<Complex64> {
        let eps = Complex64::new(0.0, -u / 2.0);
        let psi: Vec<f64> = (0..4).map(|k| polygamma(k, self.c)).collect::<Result<_>>()?;
        let e_over_eps =
            -2.0 * self.beta + psi[0] - eps * psi[1] / 2.0 + eps * eps * psi[2] / 6.0 - eps * eps * eps * psi[3] / 24.0;
        let e = eps * e_over_eps;
        let expm1_over_e = 1.0 + e / 2.0 + e * e / 6.0 + e * e * e / 24.0 + e * e * e * e / 120.0;
        let gamma_1p = log_gamma(1.0 + eps)?.exp();
        Ok(self.k / gamma_real(self.c)? * gamma_1p * e_over_eps * expm1_over_e)
    }
}

fn closed_ratio(spec: &MultiplierSpec) -> Result<GammaRatio> {
    let c = spec.c();
    let lead = log_gamma(Complex64::new(c - 0.5, 0.0))?;
    let k = lead.exp().re / (4.0 * PI.sqrt());
    Ok(GammaRatio { k, beta: -(2f64.ln()), c })
}

fn exact_ratio(spec: &MultiplierSpec) -> GammaRatio {
    GammaRatio { k: PI.powf(spec.n as f64 / 2.0) / (4.0 * PI), beta: PI.ln(), c: spec.c() }
}

/// `A_α(u) = Γ(c−½) Γ(−iu/2) / (4√π) · [2^{−iu}/Γ(c+iu/2) − 1/Γ(c)]`,
/// `c = α + n/2`, with the removable singularity at `u = 0` filled in.
///
/// Fails with [`Error::Pole`] when `c − ½` is a non-positive integer.
pub fn a_alpha_closed(u: f64, spec: &MultiplierSpec) -> Result<Complex64> {
    closed_ratio(spec)?.eval(u)
}

/// `A_α(u) = π^{n/2} Γ(−iu/2) / (4π) · [π^{iu}/Γ(c+iu/2) − 1/Γ(c)]`, the
/// term-by-term Mellin transform of `F*_α`.
pub fn a_alpha_exact(u: f64, spec: &MultiplierSpec) -> Result<Complex64> {
    exact_ratio(spec).eval(u)
}

pub fn a_alpha(form: CoefficientForm, u: f64, spec: &MultiplierSpec) -> Result<Complex64> {
    match form {
        CoefficientForm::Displayed => a_alpha_closed(u, spec),
        CoefficientForm::Exact => a_alpha_exact(u, spec),
    }
}

/// Trapezoid settings for the log-substituted Mellin integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureParams {
    /// Integrate over `s = ln λ ∈ [−s_max, s_max]`.
    pub s_max: f64,
    pub steps: usize,
    /// Tail bounds above `10 × tolerance` produce a warning.
    pub tolerance: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self { s_max: 20.0, steps: 200_000, tolerance: 1e-6 }
    }
}

impl QuadratureParams {
    fn validate(&self) -> Result<()> {
        if !(self.s_max > 0.0 && self.s_max.is_finite()) {
            return Err(Error::Precondition(format!("s_max must be positive, got {}", self.s_max)));
        }
        if self.steps < 1000 {
            return Err(Error::Precondition(format!("steps must be at least 1000, got {}", self.steps)));
        }
        Ok(())
    }

    fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 2.0 * self.s_max / self.steps as f64;
        (0..=self.steps).map(move |j| {
            let w = if j == 0 || j == self.steps { 0.5 * h } else { h };
            (-self.s_max + j as f64 * h, w)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Bound on the part of the integral outside `[−s_max, s_max]`.
    pub tail_bound: f64,
    pub warning: Option<String>,
}

/// `(1/2π) ∫_{−s_max}^{s_max} g(e^s) e^{−ius} ds` by the composite trapezoid rule.
pub fn mellin_coefficient_quadrature(g: impl Fn(f64) -> f64, u: f64, s_max: f64, steps: usize) -> Result<Complex64> {
    let params = QuadratureParams { s_max, steps, tolerance: 0.0 };
    params.validate()?;
    let samples: Vec<(f64, f64)> = params.nodes().map(|(s, w)| (s, w * g(s.exp()))).collect();
    Ok(oscillatory_sum(&samples, u))
}

fn oscillatory_sum(weighted: &[(f64, f64)], u: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for &(s, v) in weighted {
        let (sn, cs) = (u * s).sin_cos();
        re += v * cs;
        im -= v * sn;
    }
    Complex64::new(re, im) / (2.0 * PI)
}

/// Analytic bound on the neglected tails of `(1/2π)∫|F*_α(e^s)| ds`.
///
/// Upper tail from `|J_ν(x)| ≤ √(2/(πx))`, giving `|F_α(λ)| ≤ π^{−α} λ^{−ν−½}`;
/// lower tail from the leading term `F_α(0)(1 − π²/(ν+1)) λ²`.
pub fn quadrature_tail_bound(spec: &MultiplierSpec, s_max: f64) -> f64 {
    let nu = spec.nu();
    let decay = nu + 0.5;
    let upper = if decay > 0.0 {
        PI.powf(-spec.alpha) * (-decay * s_max).exp() / decay
    } else {
        f64::INFINITY
    };
    let lower = spec.f_zero() * (1.0 - PI * PI / (nu + 1.0)).abs() * (-2.0 * s_max).exp() / 2.0;
    (upper + lower) / (2.0 * PI)
}

/// Samples of `F*_α(e^s)` on the trapezoid nodes, reusable across `u`.
pub struct MellinSamples {
    params: QuadratureParams,
    tail_bound: f64,
    weighted: Vec<(f64, f64)>,
}

impl MellinSamples {
    pub fn new(spec: &MultiplierSpec, params: QuadratureParams) -> Result<Self> {
        params.validate()?;
        let nodes: Vec<(f64, f64)> = params.nodes().collect();
        let weighted = nodes.par_iter().map(|&(s, w)| (s, w * f_star(s.exp(), spec))).collect();
        Ok(Self { params, tail_bound: quadrature_tail_bound(spec, params.s_max), weighted })
    }

    pub fn coefficient(&self, u: f64) -> QuadratureResult {
        let warning = (self.tail_bound > 10.0 * self.params.tolerance).then(|| {
            format!(
                "tail bound {:.3e} exceeds 10x tolerance {:.1e} (s_max = {})",
                self.tail_bound, self.params.tolerance, self.params.s_max
            )
        });
        QuadratureResult { value: oscillatory_sum(&self.weighted, u), tail_bound: self.tail_bound, warning }
    }
}

/// `A_α(u)` from its defining integral.
pub fn a_alpha_quadrature(u: f64, spec: &MultiplierSpec, params: QuadratureParams) -> Result<QuadratureResult> {
    Ok(MellinSamples::new(spec, params)?.coefficient(u))
}

/// Trapezoid approximation of `∫_{−u_max}^{u_max} A(u) λ^{iu} du`.
pub fn mellin_reconstruct_with(
    form: CoefficientForm,
    lambda: f64,
    spec: &MultiplierSpec,
    u_max: f64,
    du: f64,
) -> Result<Complex64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    if !(u_max > 0.0 && du > 0.0 && u_max.is_finite()) {
        return Err(Error::Precondition(format!("need u_max > 0 and du > 0, got {u_max}, {du}")));
    }
    let intervals = ((2.0 * u_max / du).round() as usize).max(1);
    let h = 2.0 * u_max / intervals as f64;
    let ln_lambda = lambda.ln();
    let terms: Vec<Complex64> = (0..=intervals)
        .into_par_iter()
        .map(|j| {
            let u = -u_max + j as f64 * h;
            let w = if j == 0 || j == intervals { 0.5 * h } else { h };
            a_alpha(form, u, spec).map(|a| w * a * Complex64::from_polar(1.0, u * ln_lambda))
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// Real part of the truncated inversion of [`a_alpha_closed`].
pub fn mellin_reconstruct(lambda: f64, spec: &MultiplierSpec, u_max: f64, du: f64) -> Result<f64> {
    mellin_reconstruct_with(CoefficientForm::Displayed, lambda, spec, u_max, du).map(|z| z.re)
}

/// Least-squares slope of `ln |A(u)|` against `ln(1+u)` on `points`
/// geometrically spaced `u ∈ [u_lo, u_hi]`.
pub fn decay_exponent_fit_with(
    form: CoefficientForm,
    spec: &MultiplierSpec,
    u_lo: f64,
    u_hi: f64,
    points: usize,
) -> Result<f64> {
    if !(10.0 <= u_lo && u_lo < u_hi) {
        return Err(Error::Precondition(format!("need 10 <= u_lo < u_hi, got [{u_lo}, {u_hi}]")));
    }
    if points < 2 {
        return Err(Error::Precondition("need at least two points".into()));
    }
    let ratio = (u_hi / u_lo).ln() / (points - 1) as f64;
    let mut xy = Vec::with_capacity(points);
    for j in 0..points {
        let u = u_lo * (ratio * j as f64).exp();
        xy.push(((1.0 + u).ln(), a_alpha(form, u, spec)?.norm().ln()));
    }
    let m = points as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

pub fn decay_exponent_fit(spec: &MultiplierSpec, u_lo: f64, u_hi: f64, points: usize) -> Result<f64> {
    decay_exponent_fit_with(CoefficientForm::Displayed, spec, u_lo, u_hi, points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Exact,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Exact => "exact",
            Method::Quadrature => "quadrature",
        }
    }
}

/// `A_α(u)` tabulated on an increasing `u` grid.
#[derive(Clone, Debug, Serialize)]
pub struct MellinTable {
    pub spec: MultiplierSpec,
    pub u_grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub method: Method,
    /// Quadrature only.
    pub tail_bound: Option<f64>,
    pub warnings: Vec<String>,
}

fn check_u_grid(u_grid: &[f64]) -> Result<()> {
    if u_grid.iter().any(|u| !u.is_finite()) || u_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("u grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

impl MellinTable {
    pub fn closed_form(spec: MultiplierSpec, u_grid: Vec<f64>, form: CoefficientForm) -> Result<Self> {
        check_u_grid(&u_grid)?;
        let values = u_grid.par_iter().map(|&u| a_alpha(form, u, &spec)).collect::<Result<Vec<_>>>()?;
        let method = match form {
            CoefficientForm::Displayed => Method::Closed,
            CoefficientForm::Exact => Method::Exact,
        };
        Ok(Self { spec, u_grid, values, method, tail_bound: None, warnings: Vec::new() })
    }

    pub fn quadrature(spec: MultiplierSpec, u_grid: Vec<f64>, params: QuadratureParams) -> Result<Self> {
        check_u_grid(&u_grid)?;
        let samples = MellinSamples::new(&spec, params)?;
        let results: Vec<QuadratureResult> = u_grid.par_iter().map(|&u| samples.coefficient(u)).collect();
        let mut warnings: Vec<String> = results.iter().filter_map(|r| r.warning.clone()).collect();
        warnings.dedup();
        Ok(Self {
            spec,
            values: results.iter().map(|r| r.value).collect(),
            u_grid,
            method: Method::Quadrature,
            tail_bound: Some(samples.tail_bound),
            warnings,
        })
    }

    /// Largest `|A(−u) − conj A(u)|` over mirrored pairs of the grid.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let n = self.u_grid.len();
        (0..n / 2)
            .filter(|&j| (self.u_grid[j] + self.u_grid[n - 1 - j]).abs() <= 1e-12 * self.u_grid[j].abs().max(1.0))
            .map(|j| (self.values[j] - self.values[n - 1 - j].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Columns `u, re_A, im_A, abs_A, method, alpha, n`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["u", "re_A", "im_A", "abs_A", "method", "alpha", "n"])?;
        for (u, a) in self.u_grid.iter().zip(&self.values) {
            w.write_record([
                u.to_string(),
                a.re.to_string(),
                a.im.to_string(),
                a.norm().to_string(),
                self.method.as_str().to_string(),
                self.spec.alpha.to_string(),
                self.spec.n.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Integrability of `(1+|u|)^{−α−n/2+θn/2+θδ}` over `ℝ`, the weight that
/// controls the norm of the Mellin superposition of imaginary powers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    pub exponent: f64,
    pub integrable: bool,
    /// `∫_ℝ (1+|u|)^e du = 2/(−e−1)` when `e < −1`.
    pub integral: Option<f64>,
}

pub fn mellin_integrability(spec: &MultiplierSpec, theta: f64, delta: f64) -> IntegrabilityReport {
    let n = spec.n as f64;
    let exponent = -spec.alpha - n / 2.0 + theta * n / 2.0 + theta * delta;
    let integrable = exponent < -1.0;
    IntegrabilityReport { exponent, integrable, integral: integrable.then(|| 2.0 / (-exponent - 1.0)) }
}
