//! Periodic grids, the unitary DFT and radial Fourier multipliers.
//!
//! A [`GridFunction`] samples a function on the torus `[0, L)^n` at the nodes
//! `x_j = (j / N) L`, row-major with the last axis fastest. The Fourier
//! convention is `f̂(ξ) = ∫ e^{−2πi x·ξ} f(x) dx`, realized on the lattice
//! `ξ = k / L` with `k ∈ {−N/2, …, N/2 − 1}` per axis.

mod dft;
mod factory;
mod io;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use dft::{apply_radial_multiplier, dft_forward, dft_inverse, map_radial_spectrum};
pub use factory::{gaussian_bump, gaussian_mass, plane_wave, random_band_limited};
pub use io::{read_grid, write_grid, GridDocument, Samples, DTYPE_COMPLEX, FORMAT_VERSION};

pub const MAX_DIM: usize = 4;

/// Shape and physical period of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    sizes: Vec<usize>,
    side: f64,
}

impl Geometry {
    pub fn new(sizes: Vec<usize>, side: f64) -> Result<Self> {
        if sizes.is_empty() || sizes.len() > MAX_DIM {
            return Err(Error::InvalidGrid(format!(
                "dimension must be in 1..={MAX_DIM}, got {}",
                sizes.len()
            )));
        }
        if let Some(&bad) = sizes.iter().find(|&&n| n < 2 || !n.is_power_of_two()) {
            return Err(Error::InvalidGrid(format!("axis size {bad} is not a power of two >= 2")));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidGrid(format!("side must be positive and finite, got {side}")));
        }
        Ok(Self { sizes, side })
    }

    /// `dim` axes of `n` points each.
    pub fn cubic(dim: usize, n: usize, side: f64) -> Result<Self> {
        Self::new(vec![n; dim], side)
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.side / self.sizes[axis] as f64
    }

    /// Volume of one grid cell, the Riemann-sum weight.
    pub fn cell_volume(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.dim() as i32)
    }

    /// Multi-index of a flat row-major index.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for axis in (0..self.dim()).rev() {
            idx[axis] = flat % self.sizes[axis];
            flat /= self.sizes[axis];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.sizes).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    /// Node coordinates `x_j = (j / N) L`.
    pub fn coords(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &j)| j as f64 * self.spacing(a))
            .collect()
    }

    /// Signed offset of index `j` from 0 under the minimum-image convention,
    /// i.e. `j` mapped into `{−N/2, …, N/2 − 1}`.
    pub fn signed_index(&self, axis: usize, j: usize) -> i64 {
        let n = self.sizes[axis];
        if j < n / 2 {
            j as i64
        } else {
            j as i64 - n as i64
        }
    }

    /// Node coordinates in the centered chart `[−L/2, L/2)^n` around the origin node.
    pub fn centered_coords(&self, flat: usize) -> Vec<f64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &j)| self.signed_index(a, j) as f64 * self.spacing(a))
            .collect()
    }

    /// Integer frequency vector `k` of a DFT index (FFT ordering).
    pub fn wavenumber(&self, flat: usize) -> Vec<i64> {
        self.unravel(flat)
            .iter()
            .enumerate()
            .map(|(a, &j)| self.signed_index(a, j))
            .collect()
    }

    /// `|k|²` per DFT index; `|ξ| = sqrt(|k|²) / L`.
    pub fn wavenumber_sq(&self) -> Vec<u64> {
        (0..self.len())
            .map(|flat| self.wavenumber(flat).iter().map(|&k| (k * k) as u64).sum())
            .collect()
    }

    /// Largest `|ξ|` on the frequency lattice.
    pub fn max_frequency(&self) -> f64 {
        let k2: f64 = self.sizes.iter().map(|&n| (n as f64 / 2.0).powi(2)).sum();
        k2.sqrt() / self.side
    }

    /// Minimum-image distance between two nodes.
    pub fn torus_distance(&self, a: usize, b: usize) -> f64 {
        let ia = self.unravel(a);
        let ib = self.unravel(b);
        let mut d2 = 0.0;
        for axis in 0..self.dim() {
            let n = self.sizes[axis];
            let diff = (ia[axis] + n - ib[axis]) % n;
            let off = self.signed_index(axis, diff).abs() as f64 * self.spacing(axis);
            d2 += off * off;
        }
        d2.sqrt()
    }
}

/// Complex samples on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    geometry: Geometry,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(geometry: Geometry, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != geometry.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                geometry.len(),
                samples.len()
            )));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidGrid("samples must be finite".into()));
        }
        Ok(Self { geometry, samples })
    }

    pub fn from_real(geometry: Geometry, values: &[f64]) -> Result<Self> {
        Self::new(geometry, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(x)` at every node.
    pub fn from_fn(geometry: Geometry, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let samples = (0..geometry.len()).map(|i| f(&geometry.coords(i))).collect();
        Self::new(geometry, samples)
    }

    pub fn zeros(geometry: Geometry) -> Self {
        let n = geometry.len();
        Self { geometry, samples: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn constant(geometry: Geometry, value: Complex64) -> Self {
        let n = geometry.len();
        Self { geometry, samples: vec![value; n] }
    }

    pub(crate) fn from_parts_unchecked(geometry: Geometry, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), geometry.len());
        Self { geometry, samples }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_parts_unchecked(self.geometry.clone(), self.samples.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn abs(&self) -> Self {
        self.map(|z| Complex64::new(z.norm(), 0.0))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.geometry != other.geometry {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.geometry, other.geometry
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts_unchecked(self.geometry.clone(), samples))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts_unchecked(self.geometry.clone(), samples))
    }

    /// Discrete `L²` norm `(Σ |f|² · cell)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.geometry.cell_volume()).sqrt()
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Riemann sum `Σ f · cell`.
    pub fn integral(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() * self.geometry.cell_volume()
    }

    /// Largest `|Im f|`, for checking that an output is real.
    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }
}
