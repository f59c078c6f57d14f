//! Wave and Darboux propagators built from spherical means.
//!
//! With `α = (3−n)/2` the Bessel order of `F_α` is `½` in every dimension, and
//! `c_n t F_α(t|ξ|) = sin(2πt|ξ|)/(2π|ξ|)` is exactly the Fourier symbol of
//! the solution operator of `u_tt = Δu`, `u(0) = 0`, `u_t(0) = f`. Here
//! `c_n = Γ(3/2)/π^{n/2} = 1/F_α(0)`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{apply_radial_multiplier, dft_forward, dft_inverse, Geometry, GridFunction};
use crate::mellin::{f_alpha, MultiplierSpec};
use crate::operators::{geometric_grid, spherical_maximal};
use crate::specfun::{bessel_j_scaled, gamma_real};
use crate::varlp::{check_bound_hypotheses, luxemburg_norm, Claim, VariableExponent};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WaveConfig {
    n: usize,
    alpha: f64,
    c_n: f64,
    t_grid: Vec<f64>,
}

impl WaveConfig {
    /// `n ∈ 1..=4`. Dimension 1 lies outside the range where the spherical
    /// maximal bounds apply; see [`WaveConfig::is_smoke_only`].
    pub fn new(n: usize, t_grid: Vec<f64>) -> Result<Self> {
        if !(1..=4).contains(&n) {
            return Err(Error::Precondition(format!("wave dimension must be in 1..=4, got {n}")));
        }
        if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) || t_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition("t grid must be positive and strictly increasing".into()));
        }
        let alpha = (3.0 - n as f64) / 2.0;
        let c_n = gamma_real(1.5)? / PI.powf(n as f64 / 2.0);
        Ok(Self { n, alpha, c_n, t_grid })
    }

    /// Uses [`default_wave_t_grid`].
    pub fn for_geometry(geom: &Geometry) -> Result<Self> {
        Self::new(geom.dim(), default_wave_t_grid(geom))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c_n(&self) -> f64 {
        self.c_n
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn with_t_grid(mut self, t_grid: Vec<f64>) -> Result<Self> {
        self = Self::new(self.n, t_grid)?;
        Ok(self)
    }

    pub fn is_smoke_only(&self) -> bool {
        self.n < 2
    }

    pub fn spec(&self) -> MultiplierSpec {
        MultiplierSpec::new(self.alpha, self.n).expect("wave order has Bessel index 1/2")
    }

    fn check(&self, f: &GridFunction) -> Result<()> {
        if f.dim() != self.n {
            return Err(Error::GridMismatch(format!(
                "wave configured for n = {}, grid has dimension {}",
                self.n,
                f.dim()
            )));
        }
        Ok(())
    }
}

/// 64 geometric times in `[L/(2N), L/2]`, `N` the largest axis size.
pub fn default_wave_t_grid(geom: &Geometry) -> Vec<f64> {
    let n = geom.sizes().iter().copied().max().unwrap_or(1) as f64;
    geometric_grid(geom.side() / (2.0 * n), geom.side() / 2.0, 64)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `u(·,t) = c_n t M_t^α f`. The symbol is odd in `t`; `t = 0` gives zero.
pub fn wave_propagate(f: &GridFunction, t: f64, cfg: &WaveConfig) -> Result<GridFunction> {
    cfg.check(f)?;
    if t == 0.0 {
        return Ok(GridFunction::zeros(f.geometry().clone()));
    }
    let spec = cfg.spec();
    let c = cfg.c_n * t;
    apply_radial_multiplier(f, |xi| real(c * f_alpha(t * xi, &spec)), real(t))
}

/// `∂_t u(·,t)`, from `d/dμ [μ^{−ν} J_ν(2πμ)] = −2π μ^{−ν} J_{ν+1}(2πμ)`.
pub fn wave_velocity(f: &GridFunction, t: f64, cfg: &WaveConfig) -> Result<GridFunction> {
    cfg.check(f)?;
    let nu = cfg.spec().nu();
    let scale = cfg.c_n * PI.powf(cfg.n as f64 / 2.0);
    apply_radial_multiplier(
        f,
        |xi| {
            let mu = (t * xi).abs();
            let x = 2.0 * PI * mu;
            let s0 = bessel_j_scaled(nu, x).unwrap_or(f64::NAN);
            let s1 = bessel_j_scaled(nu + 1.0, x).unwrap_or(f64::NAN);
            real(scale * (s0 - 2.0 * PI * PI * mu * mu * s1))
        },
        real(1.0),
    )
}

/// Solution `c_n M_t^α f` of the Darboux equation with `u(·,0) = f`.
pub fn darboux_solution(f: &GridFunction, t: f64, cfg: &WaveConfig) -> Result<GridFunction> {
    cfg.check(f)?;
    if t == 0.0 {
        return Ok(f.clone());
    }
    let spec = cfg.spec();
    let c = cfg.c_n;
    apply_radial_multiplier(f, |xi| real(c * f_alpha(t * xi, &spec)), real(1.0))
}

/// `‖u_t‖₂² + ‖∇u‖₂²` at time `t`, gradient taken spectrally.
pub fn energy(f: &GridFunction, t: f64, cfg: &WaveConfig) -> Result<f64> {
    let u = wave_propagate(f, t, cfg)?;
    let ut = wave_velocity(f, t, cfg)?;
    Ok(ut.l2_norm().powi(2) + gradient_energy(&u))
}

fn gradient_energy(u: &GridFunction) -> f64 {
    let g = u.geometry();
    let spec = dft_forward(u);
    let side = g.side();
    let sum: f64 = g
        .wavenumber_sq()
        .iter()
        .zip(spec.samples())
        .map(|(&k2, z)| (2.0 * PI).powi(2) * k2 as f64 / (side * side) * z.norm_sqr())
        .sum();
    sum * g.cell_volume()
}

/// Largest stable leapfrog step, `(L/N)/(2π√n)`.
pub fn fd_stability_bound(geom: &Geometry) -> f64 {
    let h = (0..geom.dim()).map(|a| geom.spacing(a)).fold(f64::INFINITY, f64::min);
    h / (2.0 * PI * (geom.dim() as f64).sqrt())
}

/// Leapfrog integration of `u_tt = Δu`, `u(0) = 0`, `u_t(0) = f`, with the
/// Laplacian applied mode by mode. The step is shrunk so that a whole number
/// of steps lands on `t`; the first step uses `u(dt) ≈ dt f + dt³ Δf / 6`.
pub fn wave_fd_oracle(f: &GridFunction, t: f64, dt: f64) -> Result<GridFunction> {
    let geom = f.geometry().clone();
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("t must be positive, got {t}")));
    }
    let bound = fd_stability_bound(&geom);
    if !(dt > 0.0 && dt <= bound) {
        return Err(Error::Precondition(format!("dt = {dt} outside (0, {bound}] (stability bound)")));
    }
    let steps = (t / dt).ceil() as usize;
    let dt = t / steps as f64;
    let side = geom.side();
    let omega2: Vec<f64> = geom.wavenumber_sq().iter().map(|&k2| (2.0 * PI).powi(2) * k2 as f64 / (side * side)).collect();
    let fhat = dft_forward(f).into_samples();
    let f_norm = f.l2_norm();

    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); fhat.len()];
    let mut cur: Vec<Complex64> =
        fhat.iter().zip(&omega2).map(|(&c, &w2)| c * (dt - dt * dt * dt * w2 / 6.0)).collect();
    for m in 1..steps {
        let next: Vec<Complex64> = cur
            .par_iter()
            .zip(&prev)
            .zip(&omega2)
            .map(|((&c, &p), &w2)| c * (2.0 - dt * dt * w2) - p)
            .collect();
        prev = std::mem::replace(&mut cur, next);
        if m % 64 == 0 || m + 1 == steps {
            // |sin(ωt)/ω| ≤ t bounds the exact solution by t‖f‖.
            let norm = (cur.iter().map(|z| z.norm_sqr()).sum::<f64>() * geom.cell_volume()).sqrt();
            let limit = 10.0 * (m + 1) as f64 * dt * f_norm;
            if norm > limit && norm > 1e-300 {
                return Err(Error::Instability(format!(
                    "leapfrog norm {norm:.3e} exceeds 10x the exact bound at step {}",
                    m + 1
                )));
            }
        }
    }
    Ok(dft_inverse(&GridFunction::new(geom, cur)?))
}

/// `max |u(·,t)/t − f|`.
pub fn small_time_limit_error(f: &GridFunction, cfg: &WaveConfig, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Precondition(format!("t must be positive, got {t}")));
    }
    let u = wave_propagate(f, t, cfg)?;
    Ok(u.scale(real(1.0 / t)).sub(f)?.max_norm())
}

/// `‖sup_{t ∈ t_grid} |u(·,t)|/t‖_{p(·)} / ‖f‖_{p(·)}`.
///
/// Requires the exponent range of the wave corollary; the dimension entry of
/// that check is not enforced so the estimate can also be probed in 2D.
pub fn a_priori_ratio(f: &GridFunction, p: &VariableExponent, cfg: &WaveConfig) -> Result<f64> {
    cfg.check(f)?;
    let report = check_bound_hypotheses(p, cfg.alpha, cfg.n, Claim::Cor36Wave);
    let blocking: Vec<String> = report
        .failures()
        .filter(|c| c.label != "3 <= n")
        .map(|c| format!("{} ({} {} {})", c.label, c.lhs, c.relation, c.rhs))
        .collect();
    if !blocking.is_empty() {
        return Err(Error::Precondition(format!("wave exponent range violated: {}", blocking.join(", "))));
    }
    if cfg.t_grid.is_empty() {
        return Err(Error::Precondition("t grid is empty".into()));
    }
    let base = luxemburg_norm(f, p)?;
    if base == 0.0 {
        return Err(Error::Precondition("a priori ratio of the zero function is undefined".into()));
    }
    // u/t = c_n M_t^α f
    let sup = spherical_maximal(f, cfg.alpha, &cfg.t_grid)?;
    let g = sup.to_grid().scale(real(cfg.c_n));
    Ok(luxemburg_norm(&g, p)? / base)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub l2: f64,
    pub max: f64,
    pub energy: f64,
}

/// Norms and energy of `u(·,t)` over the configured `t` grid.
pub fn wave_trace(f: &GridFunction, cfg: &WaveConfig) -> Result<Vec<TraceRow>> {
    cfg.check(f)?;
    cfg.t_grid
        .par_iter()
        .map(|&t| {
            let u = wave_propagate(f, t, cfg)?;
            let ut = wave_velocity(f, t, cfg)?;
            Ok(TraceRow { t, l2: u.l2_norm(), max: u.max_norm(), energy: ut.l2_norm().powi(2) + gradient_energy(&u) })
        })
        .collect()
}

/// Columns `t, l2, max, energy`.
pub fn write_trace_csv<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian_bump, plane_wave, random_band_limited};

    fn cfg(n: usize) -> WaveConfig {
        WaveConfig::new(n, vec![0.1, 0.2]).unwrap()
    }

    #[test]
    fn normalization() {
        for n in 1..=4 {
            let c = cfg(n);
            assert_eq!(c.alpha(), (3.0 - n as f64) / 2.0);
            assert!((c.c_n() * c.spec().f_zero() - 1.0).abs() < 1e-12);
            assert!((c.spec().nu() - 0.5).abs() < 1e-15);
        }
        assert!(cfg(1).is_smoke_only() && !cfg(2).is_smoke_only());
        assert!(WaveConfig::new(5, vec![]).is_err());
        assert!(WaveConfig::new(2, vec![0.2, 0.1]).is_err());
    }

    #[test]
    fn universal_symbol() {
        for n in 1..=4 {
            let c = cfg(n);
            let spec = c.spec();
            for &(t, l) in &[(0.1, 0.7), (1.3, 5.0), (0.05, 19.5)] {
                let got = c.c_n() * t * f_alpha(t * l, &spec);
                let want = (2.0 * PI * t * l).sin() / (2.0 * PI * l);
                assert!((got - want).abs() < 1e-10, "n={n} t={t} λ={l}");
            }
        }
    }

    #[test]
    fn eigenmodes_and_constants() {
        for n in 2..=4 {
            let g = Geometry::cubic(n, 8, 1.0).unwrap();
            let mut k = vec![0i64; n];
            k[0] = 2;
            k[n - 1] = -1;
            let w = plane_wave(&g, &k).unwrap();
            let kk = (k.iter().map(|v| v * v).sum::<i64>() as f64).sqrt();
            let t = 0.31;
            let u = wave_propagate(&w, t, &cfg(n)).unwrap();
            let want = (2.0 * PI * kk * t).sin() / (2.0 * PI * kk);
            assert!(u.sub(&w.scale(real(want))).unwrap().max_norm() < 1e-8);
            let d = darboux_solution(&w, t, &cfg(n)).unwrap();
            assert!(d.sub(&w.scale(real(want / t))).unwrap().max_norm() < 1e-8);

            let c = GridFunction::constant(g.clone(), real(1.7));
            let uc = wave_propagate(&c, 0.4, &cfg(n)).unwrap();
            assert!(uc.samples().iter().all(|z| (z.re - 0.68).abs() < 1e-12));
        }
    }

    #[test]
    fn initial_conditions() {
        let g = Geometry::cubic(2, 16, 1.0).unwrap();
        let f = random_band_limited(&g, 3, 4).unwrap();
        let c = cfg(2);
        assert_eq!(wave_propagate(&f, 0.0, &c).unwrap().max_norm(), 0.0);
        assert_eq!(darboux_solution(&f, 0.0, &c).unwrap(), f);
        let v0 = wave_velocity(&f, 0.0, &c).unwrap();
        assert!(v0.sub(&f).unwrap().max_norm() < 1e-12);
        let neg = wave_propagate(&f, -0.3, &c).unwrap();
        let pos = wave_propagate(&f, 0.3, &c).unwrap();
        assert!(neg.add(&pos).unwrap().max_norm() < 1e-14);
        assert!(wave_propagate(&f, 0.1, &cfg(3)).is_err());
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let g = Geometry::cubic(3, 8, 1.0).unwrap();
        let f = random_band_limited(&g, 6, 3).unwrap();
        let c = cfg(3);
        let (t, h) = (0.27, 1e-5);
        let fd = wave_propagate(&f, t + h, &c).unwrap().sub(&wave_propagate(&f, t - h, &c).unwrap()).unwrap().scale(real(0.5 / h));
        let v = wave_velocity(&f, t, &c).unwrap();
        assert!(fd.sub(&v).unwrap().max_norm() < 1e-6 * v.max_norm().max(1.0));
    }

    #[test]
    fn energy_is_conserved() {
        let g = Geometry::cubic(2, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 12, 6).unwrap();
        let mean = f.integral() / g.volume();
        let f0 = f.map(|z| z - mean);
        let c = cfg(2);
        let e0 = energy(&f0, 0.0, &c).unwrap();
        assert!((e0 - f0.l2_norm().powi(2)).abs() < 1e-12 * e0);
        for &t in &[0.1, 0.37, 1.0] {
            assert!((energy(&f0, t, &c).unwrap() - e0).abs() < 1e-8 * e0, "t={t}");
        }
    }

    #[test]
    fn darboux_profile_solves_ode() {
        let a = 2.0 * PI;
        let g = |t: f64| (a * t).sin() / (a * t);
        let h = 1e-4;
        let mut t = 0.2;
        while t <= 2.0 {
            let d2 = (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h);
            let d1 = (g(t + h) - g(t - h)) / (2.0 * h);
            assert!((d2 + 2.0 / t * d1 + a * a * g(t)).abs() < 1e-5, "t={t}");
            t += 0.05;
        }
    }

    #[test]
    fn leapfrog_is_second_order() {
        let g = Geometry::cubic(2, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 4, 5).unwrap();
        let c = cfg(2);
        let exact = wave_propagate(&f, 0.5, &c).unwrap();
        let dt = fd_stability_bound(&g);
        let e1 = wave_fd_oracle(&f, 0.5, dt).unwrap().sub(&exact).unwrap().l2_norm();
        let e2 = wave_fd_oracle(&f, 0.5, dt / 2.0).unwrap().sub(&exact).unwrap().l2_norm();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
        assert!(wave_fd_oracle(&f, 0.5, 2.0 * dt).is_err());
    }

    #[test]
    fn small_time_limit() {
        let g = Geometry::cubic(2, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 2, 4).unwrap();
        let c = cfg(2);
        assert!(small_time_limit_error(&f, &c, 1e-3).unwrap() <= 1e-3);
        // 2πt|ξ| ≪ 1 already at t = 0.1 on a longer period
        let long = Geometry::cubic(2, 32, 10.0).unwrap();
        let fl = random_band_limited(&long, 2, 2).unwrap();
        let e: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&t| small_time_limit_error(&fl, &c, t).unwrap()).collect();
        for w in e.windows(2) {
            assert!((w[0] / w[1] / 100.0 - 1.0).abs() < 0.2, "{e:?}");
        }
        let w = plane_wave(&g, &[3, 0]).unwrap();
        let t = 0.01;
        let x = 2.0 * PI * t * 3.0;
        assert!((small_time_limit_error(&w, &c, t).unwrap() - (x.sin() / x - 1.0).abs()).abs() < 1e-12);
    }

    #[test]
    fn a_priori_ratio_examples() {
        let g = Geometry::cubic(2, 16, 1.0).unwrap();
        let c = WaveConfig::for_geometry(&g).unwrap();
        let p = VariableExponent::constant(g.clone(), 2.0).unwrap();
        let one = GridFunction::constant(g.clone(), real(1.0));
        assert!((a_priori_ratio(&one, &p, &c).unwrap() - 1.0).abs() < 1e-10);

        let bump = gaussian_bump(&g, &[0.5, 0.5], 0.15).unwrap();
        let small = c.clone().with_t_grid(vec![1e-4, 0.1]).unwrap();
        assert!(a_priori_ratio(&bump, &p, &small).unwrap() >= 1.0 - 1e-6);

        let bad = VariableExponent::constant(g, 4.5).unwrap();
        assert!(matches!(a_priori_ratio(&one, &bad, &c), Err(Error::Precondition(_))));
    }

    #[test]
    fn trace_csv() {
        let g = Geometry::cubic(1, 16, 1.0).unwrap();
        let f = random_band_limited(&g, 1, 3).unwrap();
        let rows = wave_trace(&f, &WaveConfig::new(1, vec![0.1, 0.2]).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,l2,max,energy\n0.1,"));
        assert_eq!(text.lines().count(), 3);
    }
}
