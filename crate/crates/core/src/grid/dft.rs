use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use super::{Geometry, GridFunction};
use crate::error::{Error, Result};

fn transform(f: &GridFunction, direction: FftDirection) -> GridFunction {
    let geom = f.geometry().clone();
    let mut data = f.samples().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    let sizes = geom.sizes().to_vec();
    for axis in 0..sizes.len() {
        let n = sizes[axis];
        let stride: usize = sizes[axis + 1..].iter().product();
        let fft = planner.plan_fft(n, direction);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let outer = data.len() / (n * stride);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[base + j * stride];
                }
                fft.process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    data[base + j * stride] = *v;
                }
            }
        }
    }
    let norm = 1.0 / (geom.len() as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= norm);
    GridFunction::from_parts_unchecked(geom, data)
}

/// Unitary forward DFT. Coefficients are stored in FFT order; see
/// [`Geometry::wavenumber`] for the frequency of each slot.
pub fn dft_forward(f: &GridFunction) -> GridFunction {
    transform(f, FftDirection::Forward)
}

/// Inverse of [`dft_forward`].
pub fn dft_inverse(spectrum: &GridFunction) -> GridFunction {
    transform(spectrum, FftDirection::Inverse)
}

/// Evaluates `m` once per distinct nonzero `|ξ|` of the lattice.
fn symbol_table<M>(geom: &Geometry, keys: &[u64], m: &M) -> Result<HashMap<u64, Complex64>>
where
    M: Fn(f64) -> Complex64 + Sync,
{
    let distinct: Vec<u64> = keys.iter().copied().filter(|&k| k != 0).collect::<BTreeSet<_>>().into_iter().collect();
    let side = geom.side();
    distinct
        .par_iter()
        .map(|&k2| {
            let xi = (k2 as f64).sqrt() / side;
            let v = m(xi);
            if v.re.is_finite() && v.im.is_finite() {
                Ok((k2, v))
            } else {
                Err(Error::MultiplierEvaluation { xi, reason: format!("non-finite value {v}") })
            }
        })
        .collect()
}

/// Multiplies a spectrum (output of [`dft_forward`]) by the radial symbol
/// `m(|ξ|)`, with the `ξ = 0` coefficient multiplied by `zero_mode`.
pub fn map_radial_spectrum<M>(spectrum: &GridFunction, m: M, zero_mode: Complex64) -> Result<GridFunction>
where
    M: Fn(f64) -> Complex64 + Sync,
{
    let geom = spectrum.geometry();
    let keys = geom.wavenumber_sq();
    let table = symbol_table(geom, &keys, &m)?;
    let samples = spectrum
        .samples()
        .iter()
        .zip(&keys)
        .map(|(&c, k2)| if *k2 == 0 { c * zero_mode } else { c * table[k2] })
        .collect();
    Ok(GridFunction::from_parts_unchecked(geom.clone(), samples))
}

/// Applies the radial Fourier multiplier `m(|ξ|)` to `f`, returning the result
/// in the space domain. `zero_mode` replaces the symbol at `ξ = 0`, where many
/// of the symbols used here are singular or have no defined phase.
pub fn apply_radial_multiplier<M>(f: &GridFunction, m: M, zero_mode: Complex64) -> Result<GridFunction>
where
    M: Fn(f64) -> Complex64 + Sync,
{
    let spectrum = dft_forward(f);
    Ok(dft_inverse(&map_radial_spectrum(&spectrum, m, zero_mode)?))
}
