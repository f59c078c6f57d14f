use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{dft_inverse, Geometry, GridFunction};
use crate::error::{Error, Result};

/// `e^{2πi k·x/L}` for an integer frequency `k` inside the lattice.
pub fn plane_wave(geom: &Geometry, k: &[i64]) -> Result<GridFunction> {
    if k.len() != geom.dim() {
        return Err(Error::Precondition(format!(
            "frequency has {} components, grid has dimension {}",
            k.len(),
            geom.dim()
        )));
    }
    for (&kj, &n) in k.iter().zip(geom.sizes()) {
        let half = (n / 2) as i64;
        if kj < -half || kj >= half {
            return Err(Error::Precondition(format!("frequency {kj} outside [-{half}, {half})")));
        }
    }
    let side = geom.side();
    GridFunction::from_fn(geom.clone(), |x| {
        let phase: f64 = k.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum::<f64>() / side;
        Complex64::from_polar(1.0, 2.0 * PI * phase)
    })
}

/// `exp(−|x − c|² / (2w²))` with `|x − c|` the minimum-image distance.
pub fn gaussian_bump(geom: &Geometry, center: &[f64], width: f64) -> Result<GridFunction> {
    if center.len() != geom.dim() {
        return Err(Error::Precondition(format!(
            "center has {} components, grid has dimension {}",
            center.len(),
            geom.dim()
        )));
    }
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Precondition(format!("width must be positive, got {width}")));
    }
    let side = geom.side();
    GridFunction::from_fn(geom.clone(), |x| {
        let r2: f64 = x
            .iter()
            .zip(center)
            .map(|(&xj, &cj)| {
                let d = (xj - cj).rem_euclid(side);
                let d = d.min(side - d);
                d * d
            })
            .sum();
        Complex64::new((-r2 / (2.0 * width * width)).exp(), 0.0)
    })
}

/// `∫ exp(−|x|²/(2w²)) dx` over `ℝⁿ`.
pub fn gaussian_mass(dim: usize, width: f64) -> f64 {
    (2.0 * PI * width * width).powf(dim as f64 / 2.0)
}

/// Real random trigonometric polynomial with `max_j |k_j| ≤ cutoff`,
/// normalized to unit sup norm. Coefficients are standard normal draws from a
/// ChaCha8 stream seeded with `seed`.
pub fn random_band_limited(geom: &Geometry, seed: u64, cutoff: usize) -> Result<GridFunction> {
    if let Some(&n) = geom.sizes().iter().find(|&&n| cutoff >= n / 2) {
        return Err(Error::Precondition(format!("cutoff {cutoff} reaches the Nyquist frequency of an axis with {n} points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = geom.len();
    let mut raw = vec![Complex64::new(0.0, 0.0); len];
    for (flat, slot) in raw.iter_mut().enumerate() {
        let inside = geom.wavenumber(flat).iter().all(|k| k.unsigned_abs() as usize <= cutoff);
        if inside {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *slot = Complex64::new(re, im);
        }
    }
    // c(k) = (z(k) + conj z(−k)) / 2 makes the inverse transform real.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for flat in 0..len {
        let neg: Vec<usize> = geom
            .unravel(flat)
            .iter()
            .zip(geom.sizes())
            .map(|(&j, &n)| (n - j) % n)
            .collect();
        coeffs[flat] = 0.5 * (raw[flat] + raw[geom.ravel(&neg)].conj());
    }
    let spectrum = GridFunction::from_parts_unchecked(geom.clone(), coeffs);
    let real: Vec<f64> = dft_inverse(&spectrum).real_parts();
    let peak = real.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if peak > 0.0 { 1.0 / peak } else { 1.0 };
    GridFunction::from_real(geom.clone(), &real.iter().map(|v| v * scale).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_plane_wave_is_constant_one() {
        let g = Geometry::new(vec![8, 4], 3.0).unwrap();
        let f = plane_wave(&g, &[0, 0]).unwrap();
        assert!(f.samples().iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn plane_wave_rejects_out_of_lattice() {
        let g = Geometry::cubic(1, 8, 1.0).unwrap();
        assert!(plane_wave(&g, &[4]).is_err());
        assert!(plane_wave(&g, &[-4]).is_ok());
        assert!(plane_wave(&g, &[1, 1]).is_err());
    }

    #[test]
    fn gaussian_mass_matches_riemann_sum() {
        for dim in 1..=3 {
            let g = Geometry::cubic(dim, 64, 10.0).unwrap();
            let c = vec![5.0; dim];
            let f = gaussian_bump(&g, &c, 0.6).unwrap();
            let got = f.integral().re;
            assert!((got - gaussian_mass(dim, 0.6)).abs() < 1e-8, "dim {dim}: {got}");
        }
    }

    #[test]
    fn gaussian_bump_wraps_around() {
        let g = Geometry::cubic(1, 16, 1.0).unwrap();
        let f = gaussian_bump(&g, &[0.0], 0.1).unwrap();
        assert!((f.samples()[1].re - f.samples()[15].re).abs() < 1e-15);
    }

    #[test]
    fn random_band_limited_is_reproducible_and_real() {
        let g = Geometry::cubic(2, 16, 1.0).unwrap();
        let a = random_band_limited(&g, 1, 4).unwrap();
        let b = random_band_limited(&g, 1, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_band_limited(&g, 2, 4).unwrap());
        assert_eq!(a.max_imag(), 0.0);
        assert!((a.max_norm() - 1.0).abs() < 1e-15);
        assert!(random_band_limited(&g, 1, 8).is_err());
    }

    #[test]
    fn random_band_limited_respects_cutoff() {
        let g = Geometry::cubic(1, 32, 1.0).unwrap();
        let f = random_band_limited(&g, 9, 3).unwrap();
        let spec = crate::grid::dft_forward(&f);
        for (i, z) in spec.samples().iter().enumerate() {
            if g.wavenumber(i)[0].abs() > 3 {
                assert!(z.norm() < 1e-13);
            }
        }
    }
}
