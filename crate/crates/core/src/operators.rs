//! Grid realizations of radial Fourier multipliers and maximal operators.
//!
//! Every operator acts on the discrete frequency lattice of the torus, so
//! identities between multipliers hold up to round-off. Suprema over `t > 0`
//! are taken over a finite `t` grid.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{apply_radial_multiplier, dft_forward, dft_inverse, map_radial_spectrum, Geometry, GridFunction};
use crate::mellin::{f_alpha, f_star, MultiplierSpec};
use crate::varlp::{luxemburg_norm, VariableExponent};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Riesz potential `(−Δ)^{−α/2}`, symbol `(2π|ξ|)^{−α}`; the mean is annihilated.
pub fn riesz_potential(f: &GridFunction, alpha: f64) -> Result<GridFunction> {
    let n = f.dim() as f64;
    if !(alpha > 0.0 && alpha < n) {
        return Err(Error::Precondition(format!("Riesz order must lie in (0, {n}), got {alpha}")));
    }
    apply_radial_multiplier(f, |xi| real((2.0 * PI * xi).powf(-alpha)), ZERO)
}

/// `(−Δ)^{β/2}`, symbol `(2π|ξ|)^β`. The zero mode is kept only for `β = 0`.
pub fn laplacian_power(f: &GridFunction, beta: f64) -> Result<GridFunction> {
    let zero_mode = if beta == 0.0 { ONE } else { ZERO };
    apply_radial_multiplier(f, |xi| real((2.0 * PI * xi).powf(beta)), zero_mode)
}

/// Imaginary power `I_{iu} = (−Δ)^{−iu/2}`, symbol `(2π|ξ|)^{−iu}`.
///
/// The symbol has modulus one but no phase at `ξ = 0`; the zero mode is
/// passed through unchanged, which keeps the mean of real data real.
pub fn imaginary_power(f: &GridFunction, u: f64) -> Result<GridFunction> {
    if u == 0.0 {
        return Ok(f.clone());
    }
    apply_radial_multiplier(f, |xi| Complex64::from_polar(1.0, -u * (2.0 * PI * xi).ln()), ONE)
}

fn spec_for(f: &GridFunction, alpha: f64) -> Result<MultiplierSpec> {
    MultiplierSpec::new(alpha, f.dim())
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Precondition(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// Spherical mean `M_t^α`, symbol `F_α(t|ξ|)`, zero mode `F_α(0)`.
pub fn spherical_mean(f: &GridFunction, t: f64, alpha: f64) -> Result<GridFunction> {
    check_time(t)?;
    let spec = spec_for(f, alpha)?;
    apply_radial_multiplier(f, |xi| real(f_alpha(t * xi, &spec)), real(spec.f_zero()))
}

/// The part of `M_t^α` with symbol `F*_α(t|ξ|)`; it annihilates the mean.
pub fn f_star_part(f: &GridFunction, t: f64, alpha: f64) -> Result<GridFunction> {
    check_time(t)?;
    let spec = spec_for(f, alpha)?;
    apply_radial_multiplier(f, |xi| real(f_star(t * xi, &spec)), ZERO)
}

/// Gaussian part of `M_t^α`, symbol `F_α(0) e^{−(t|ξ|)²}`.
pub fn gaussian_part(f: &GridFunction, t: f64, alpha: f64, n: usize) -> Result<GridFunction> {
    check_time(t)?;
    if n != f.dim() {
        return Err(Error::GridMismatch(format!("dimension {n} requested for a {}-dimensional grid", f.dim())));
    }
    let spec = spec_for(f, alpha)?;
    let c = spec.f_zero();
    apply_radial_multiplier(f, |xi| real(c * (-(t * xi).powi(2)).exp()), real(c))
}

/// Pointwise supremum over a finite parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximalResult {
    #[serde(skip)]
    pub geometry: Geometry,
    pub values: Vec<f64>,
    pub t_grid: Vec<f64>,
    /// Index into `t_grid` of the first parameter attaining the maximum.
    pub argmax_t: Vec<usize>,
}

impl MaximalResult {
    pub fn to_grid(&self) -> GridFunction {
        GridFunction::from_real(self.geometry.clone(), &self.values).expect("finite maximal values")
    }

    /// Fold of per-`t` magnitudes in `t` order; ties keep the earlier index.
    fn reduce(geometry: Geometry, t_grid: Vec<f64>, layers: Vec<Vec<f64>>) -> Self {
        let len = geometry.len();
        let mut values = vec![f64::NEG_INFINITY; len];
        let mut argmax_t = vec![0; len];
        for (k, layer) in layers.iter().enumerate() {
            for i in 0..len {
                if layer[i] > values[i] {
                    values[i] = layer[i];
                    argmax_t[i] = k;
                }
            }
        }
        Self { geometry, values, t_grid, argmax_t }
    }
}

fn check_t_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::Precondition("t grid is empty".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::Precondition("t grid values must be positive".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("t grid must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` geometrically spaced values in `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => return Vec::new(),
        1 => return vec![lo],
        _ => {}
    }
    let ratio = (hi / lo).ln() / (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count).map(|j| lo * (ratio * j as f64).exp()).collect();
    grid[count - 1] = hi;
    grid
}

/// 48 geometric radii from the finest spacing to `L/2`.
pub fn default_t_grid(geom: &Geometry) -> Vec<f64> {
    let h = (0..geom.dim()).map(|a| geom.spacing(a)).fold(f64::INFINITY, f64::min);
    geometric_grid(h, geom.side() / 2.0, 48)
}

fn maximal_over<M>(f: &GridFunction, t_grid: &[f64], symbol: M) -> Result<MaximalResult>
where
    M: Fn(f64, f64) -> (Complex64, Complex64) + Sync,
{
    check_t_grid(t_grid)?;
    let spectrum = dft_forward(f);
    let layers = t_grid
        .par_iter()
        .map(|&t| {
            let zero = symbol(t, 0.0).1;
            let mapped = map_radial_spectrum(&spectrum, |xi| symbol(t, xi).0, zero)?;
            Ok(dft_inverse(&mapped).magnitudes())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MaximalResult::reduce(f.geometry().clone(), t_grid.to_vec(), layers))
}

/// `sup_t |M_t^α f|` over `t_grid`.
pub fn spherical_maximal(f: &GridFunction, alpha: f64, t_grid: &[f64]) -> Result<MaximalResult> {
    let spec = spec_for(f, alpha)?;
    let zero = real(spec.f_zero());
    maximal_over(f, t_grid, |t, xi| (real(f_alpha(t * xi, &spec)), zero))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingKind {
    /// Symbol `e^{−(t|ξ|)²}`.
    Heat,
    /// Symbol `e^{−2πt|ξ|}`, the Poisson kernel.
    Poisson,
}

/// `sup_t K_t * |f|` for the heat or Poisson family.
pub fn smoothing_maximal(f: &GridFunction, kind: SmoothingKind, t_grid: &[f64]) -> Result<MaximalResult> {
    let g = f.abs();
    maximal_over(&g, t_grid, |t, xi| {
        let s = match kind {
            SmoothingKind::Heat => (-(t * xi).powi(2)).exp(),
            SmoothingKind::Poisson => (-2.0 * PI * t * xi).exp(),
        };
        (real(s), ONE)
    })
}

/// Distinct node distances from the origin up to `L/2` (in 1D and 2D), or a
/// 16-point geometric subset (3D and up); 0 is always included.
pub fn default_hl_radii(geom: &Geometry) -> Vec<f64> {
    let half = geom.side() / 2.0;
    let mut radii = vec![0.0];
    if geom.dim() <= 2 {
        let mut d: Vec<f64> = (1..geom.len()).map(|j| geom.torus_distance(0, j)).filter(|&r| r <= half * (1.0 + 1e-12)).collect();
        d.sort_by(|a, b| a.total_cmp(b));
        d.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
        radii.extend(d);
    } else {
        let h = (0..geom.dim()).map(|a| geom.spacing(a)).fold(f64::INFINITY, f64::min);
        radii.extend(geometric_grid(h, half, 16));
    }
    radii
}

/// Discrete Hardy–Littlewood maximal function: the largest average of `|f|`
/// over the periodic balls `{y : |x − y| ≤ r}`, `r ∈ radii`.
///
/// `radii` must start at 0, which contributes `|f|` itself.
pub fn hardy_littlewood_maximal(f: &GridFunction, radii: &[f64]) -> Result<GridFunction> {
    if radii.first() != Some(&0.0) {
        return Err(Error::Precondition("radii must start at 0".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii.iter().any(|r| !r.is_finite()) {
        return Err(Error::Precondition("radii must be finite and strictly increasing".into()));
    }
    let geom = f.geometry().clone();
    let mags = f.magnitudes();
    let spectrum = dft_forward(&f.abs());
    let dist: Vec<f64> = (0..geom.len()).map(|j| geom.torus_distance(0, j)).collect();
    let scale = (geom.len() as f64).sqrt();
    let layers = radii[1..]
        .par_iter()
        .map(|&r| {
            let inside: Vec<Complex64> = dist.iter().map(|&d| if d <= r * (1.0 + 1e-12) { ONE } else { ZERO }).collect();
            let count = inside.iter().filter(|z| z.re > 0.0).count() as f64;
            let ball = dft_forward(&GridFunction::from_parts_unchecked(geom.clone(), inside));
            let product: Vec<Complex64> =
                spectrum.samples().iter().zip(ball.samples()).map(|(a, b)| a * b * (scale / count)).collect();
            dft_inverse(&GridFunction::from_parts_unchecked(geom.clone(), product)).real_parts()
        })
        .collect::<Vec<_>>();
    let mut values = mags;
    for layer in layers {
        for (v, a) in values.iter_mut().zip(layer) {
            *v = v.max(a);
        }
    }
    GridFunction::from_real(geom, &values)
}

/// Growth of `‖I_{iu} f‖_{p(·)} / ‖f‖_{p(·)}` in `u`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormGrowth {
    pub u: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Least-squares slope of `ln ratio` against `ln(1+u)`.
    pub slope: f64,
}

pub fn norm_growth(f: &GridFunction, p: &VariableExponent, u_values: &[f64]) -> Result<NormGrowth> {
    if u_values.len() < 2 {
        return Err(Error::Precondition("need at least two u values".into()));
    }
    let base = luxemburg_norm(f, p)?;
    if base == 0.0 {
        return Err(Error::Precondition("norm growth of the zero function is undefined".into()));
    }
    let ratios = u_values
        .par_iter()
        .map(|&u| Ok(luxemburg_norm(&imaginary_power(f, u)?, p)? / base))
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = u_values.iter().map(|u| (1.0 + u.abs()).ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    Ok(NormGrowth { u: u_values.to_vec(), ratios, slope: slope(&xs, &ys) })
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{gaussian_bump, plane_wave, random_band_limited};

    fn close(a: &GridFunction, b: &GridFunction, tol: f64) -> bool {
        a.sub(b).unwrap().max_norm() <= tol
    }

    #[test]
    fn riesz_eigenrelation_and_mean() {
        let g = Geometry::cubic(2, 16, 1.0).unwrap();
        let w = plane_wave(&g, &[3, -2]).unwrap();
        let out = riesz_potential(&w, 0.7).unwrap();
        let k = 13f64.sqrt();
        assert!(close(&out, &w.scale(real((2.0 * PI * k).powf(-0.7))), 1e-12));
        let c = GridFunction::constant(g.clone(), real(2.0));
        assert!(riesz_potential(&c, 0.7).unwrap().max_norm() < 1e-14);
        assert!(riesz_potential(&c, 2.0).is_err());
        assert!(riesz_potential(&c, 0.0).is_err());
    }

    #[test]
    fn riesz_inverts_fractional_laplacian_on_mean_zero() {
        let g = Geometry::cubic(1, 64, 2.0).unwrap();
        let f = random_band_limited(&g, 5, 12).unwrap();
        let mean = f.integral() / g.volume();
        let f0 = f.map(|z| z - mean);
        let back = riesz_potential(&laplacian_power(&f0, 0.6).unwrap(), 0.6).unwrap();
        assert!(close(&back, &f0, 1e-10));
    }

    #[test]
    fn imaginary_power_basics() {
        let g = Geometry::cubic(2, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 2, 9).unwrap();
        assert_eq!(imaginary_power(&f, 0.0).unwrap(), f);
        let out = imaginary_power(&f, 7.3).unwrap();
        assert!((out.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-12);
        let w = plane_wave(&g, &[1, 2]).unwrap();
        let lam = 2.0 * PI * 5f64.sqrt();
        let want = w.scale(Complex64::from_polar(1.0, -7.3 * lam.ln()));
        assert!(close(&imaginary_power(&w, 7.3).unwrap(), &want, 1e-12));
        let twice = imaginary_power(&imaginary_power(&f, 1.5).unwrap(), -4.0).unwrap();
        assert!(close(&twice, &imaginary_power(&f, -2.5).unwrap(), 1e-11));
    }

    #[test]
    fn spherical_mean_examples() {
        let g = Geometry::cubic(3, 8, 1.0).unwrap();
        let one = GridFunction::constant(g.clone(), ONE);
        let ball = spherical_mean(&one, 0.3, 1.0).unwrap();
        assert!(ball.samples().iter().all(|z| (z.re - 4.0 * PI / 3.0).abs() < 1e-12));

        let w = plane_wave(&g, &[1, 0, 2]).unwrap();
        let k = 5f64.sqrt();
        let t = 0.37;
        let want = (2.0 * PI * t * k).sin() / (t * k);
        assert!(close(&spherical_mean(&w, t, 0.0).unwrap(), &w.scale(real(want)), 1e-10));
        assert!(spherical_mean(&w, 0.0, 0.0).is_err());
    }

    #[test]
    fn one_dimensional_mean_is_two_point_average() {
        let g = Geometry::cubic(1, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 4, 7).unwrap();
        let h = g.spacing(0);
        let out = spherical_mean(&f, 3.0 * h, 0.0).unwrap();
        for i in 0..32 {
            let avg = 0.5 * (f.samples()[(i + 3) % 32] + f.samples()[(i + 29) % 32]);
            assert!((out.samples()[i] - avg).norm() < 1e-12);
        }
    }

    #[test]
    fn split_into_f_star_and_gaussian_parts() {
        for &(n, alpha, size) in &[(3usize, 0.0, 16usize), (2, 0.5, 32)] {
            let g = Geometry::cubic(n, size, 1.0).unwrap();
            let f = random_band_limited(&g, 1, 5).unwrap();
            let t = 0.21;
            let whole = spherical_mean(&f, t, alpha).unwrap();
            let parts = f_star_part(&f, t, alpha).unwrap().add(&gaussian_part(&f, t, alpha, n).unwrap()).unwrap();
            assert!(close(&whole, &parts, 1e-10));
        }
    }

    #[test]
    fn gaussian_part_decays() {
        let g = Geometry::cubic(1, 32, 1.0).unwrap();
        let w = plane_wave(&g, &[2]).unwrap();
        let out = gaussian_part(&w, 0.1, 0.0, 1).unwrap();
        assert!(close(&out, &w.scale(real((-(0.2f64).powi(2)).exp())), 1e-12));
        let f = random_band_limited(&g, 3, 6).unwrap();
        let mean = f.integral() / g.volume();
        let f0 = f.map(|z| z - mean);
        // lowest nonzero |ξ| is 1/L
        let big = gaussian_part(&f0, 3.0, 0.0, 1).unwrap();
        assert!(big.l2_norm() <= (-9f64).exp() * f0.l2_norm() * (1.0 + 1e-12));
        assert!(gaussian_part(&w, 0.1, 0.0, 2).is_err());
    }

    #[test]
    fn spherical_maximal_properties() {
        let g = Geometry::cubic(3, 8, 1.0).unwrap();
        let one = GridFunction::constant(g.clone(), ONE);
        let m = spherical_maximal(&one, 0.0, &[0.1, 0.2, 0.4]).unwrap();
        assert!(m.values.iter().all(|v| (v - 2.0 * PI).abs() < 1e-12));

        let g2 = Geometry::cubic(2, 32, 1.0).unwrap();
        let f = random_band_limited(&g2, 8, 6).unwrap();
        let single = spherical_maximal(&f, 0.5, &[0.13]).unwrap();
        assert_eq!(single.values, spherical_mean(&f, 0.13, 0.5).unwrap().magnitudes());
        let coarse = spherical_maximal(&f, 0.5, &[0.05, 0.2]).unwrap();
        let fine = spherical_maximal(&f, 0.5, &[0.05, 0.1, 0.2, 0.3]).unwrap();
        assert!(coarse.values.iter().zip(&fine.values).all(|(a, b)| b >= a));
        assert!(fine.argmax_t.iter().all(|&k| k < 4));
        assert!(spherical_maximal(&f, 0.5, &[]).is_err());
        assert!(spherical_maximal(&f, 0.5, &[0.2, 0.1]).is_err());
    }

    #[test]
    fn hardy_littlewood_examples() {
        let g = Geometry::cubic(1, 8, 1.0).unwrap();
        let mut spike = vec![0.0; 8];
        spike[0] = 1.0;
        let f = GridFunction::from_real(g.clone(), &spike).unwrap();
        let m = hardy_littlewood_maximal(&f, &[0.0, g.spacing(0)]).unwrap();
        assert!((m.samples()[0].re - 1.0).abs() < 1e-14);
        assert!((m.samples()[1].re - 1.0 / 3.0).abs() < 1e-14);
        assert!((m.samples()[7].re - 1.0 / 3.0).abs() < 1e-14);
        assert!(m.samples()[3].re.abs() < 1e-14);

        let c = GridFunction::constant(g.clone(), real(-2.5));
        let mc = hardy_littlewood_maximal(&c, &default_hl_radii(&g)).unwrap();
        assert!(mc.samples().iter().all(|z| (z.re - 2.5).abs() < 1e-13));
        assert!(hardy_littlewood_maximal(&c, &[0.1]).is_err());
    }

    #[test]
    fn hardy_littlewood_dominates_modulus() {
        let g = Geometry::cubic(2, 16, 1.0).unwrap();
        let f = random_band_limited(&g, 3, 4).unwrap();
        let m = hardy_littlewood_maximal(&f, &default_hl_radii(&g)).unwrap();
        assert!(m.samples().iter().zip(f.samples()).all(|(a, b)| a.re >= b.norm()));
    }

    #[test]
    fn smoothing_maximal_examples() {
        let g = Geometry::cubic(1, 64, 1.0).unwrap();
        let c = GridFunction::constant(g.clone(), real(1.5));
        for kind in [SmoothingKind::Heat, SmoothingKind::Poisson] {
            let m = smoothing_maximal(&c, kind, &[0.01, 0.1]).unwrap();
            assert!(m.values.iter().all(|v| (v - 1.5).abs() < 1e-13));
        }
        let f = gaussian_bump(&g, &[0.5], 0.05).unwrap();
        let hl = hardy_littlewood_maximal(&f, &default_hl_radii(&g)).unwrap();
        let p = smoothing_maximal(&f, SmoothingKind::Poisson, &default_t_grid(&g)).unwrap();
        let ratio = p.values.iter().zip(hl.samples()).map(|(a, b)| a / b.re).fold(0.0, f64::max);
        assert!(ratio <= 3.0, "ratio {ratio}");
    }

    #[test]
    fn default_radii() {
        let g = Geometry::cubic(1, 8, 1.0).unwrap();
        assert_eq!(default_hl_radii(&g), vec![0.0, 0.125, 0.25, 0.375, 0.5]);
        assert_eq!(default_hl_radii(&Geometry::cubic(3, 8, 1.0).unwrap()).len(), 17);
        assert_eq!(default_t_grid(&g).len(), 48);
    }
}
