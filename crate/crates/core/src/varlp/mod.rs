//! Variable-exponent Lebesgue spaces on a periodic grid.
//!
//! Exponents take values in `[1, ∞]`. Integrals are Riemann sums with the grid
//! cell volume as weight; the region where `p = ∞` contributes through an
//! essential supremum instead of an integral.

mod holder;
mod hypotheses;
mod norm;
mod transform;

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Geometry, GridDocument, Samples, FORMAT_VERSION};

pub use holder::{log_holder_constants, LogHolderConstants};
pub use hypotheses::{check_bound_hypotheses, BoundCheck, BoundReport, Claim, LemmaWitness, Thm34Witness, B_CLASS_NOTE};
pub use norm::{dual_exponent, luxemburg_norm, modular};
pub use transform::{exponent_transform, ExponentTransform};

/// File encoding of `p = ∞`.
pub const INFINITY_SENTINEL: f64 = -1.0;
pub const DTYPE_EXPONENT: &str = "exponent";

/// Exponent `p(x)` sampled on the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VariableExponent {
    geometry: Geometry,
    samples: Vec<f64>,
    p_infinity: f64,
    p_minus: f64,
    p_plus: f64,
}

impl VariableExponent {
    /// Samples must lie in `[1, ∞]`; `f64::INFINITY` marks the `p = ∞` region.
    pub fn new(geometry: Geometry, samples: Vec<f64>, p_infinity: f64) -> Result<Self> {
        if samples.len() != geometry.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} exponent samples, got {}",
                geometry.len(),
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|&&p| !(p >= 1.0)) {
            return Err(Error::Domain(format!("exponent values must lie in [1, inf], got {bad}")));
        }
        if !(p_infinity >= 1.0) {
            return Err(Error::Domain(format!("p_infinity must lie in [1, inf], got {p_infinity}")));
        }
        let finite = samples.iter().copied().filter(|p| p.is_finite());
        let (p_minus, p_plus) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        let (p_minus, p_plus) = if p_plus.is_finite() { (p_minus, p_plus) } else { (f64::INFINITY, f64::INFINITY) };
        Ok(Self { geometry, samples, p_infinity, p_minus, p_plus })
    }

    /// Uses the harmonic mean of the samples as `p_∞`.
    pub fn from_samples(geometry: Geometry, samples: Vec<f64>) -> Result<Self> {
        let p_inf = harmonic_mean(&samples);
        Self::new(geometry, samples, p_inf)
    }

    pub fn constant(geometry: Geometry, q: f64) -> Result<Self> {
        let samples = vec![q; geometry.len()];
        Self::new(geometry, samples, q)
    }

    /// `p(x) = mean + amp · sin(2π x₁ / L)`, varying along the first axis.
    pub fn sinusoidal(geometry: Geometry, mean: f64, amp: f64) -> Result<Self> {
        let side = geometry.side();
        let samples = (0..geometry.len())
            .map(|i| mean + amp * (2.0 * PI * geometry.coords(i)[0] / side).sin())
            .collect();
        Self::from_samples(geometry, samples)
    }

    /// `p1` on the first half of the first axis, `p2` on the second half.
    pub fn step(geometry: Geometry, p1: f64, p2: f64) -> Result<Self> {
        let half = geometry.side() / 2.0;
        let samples = (0..geometry.len())
            .map(|i| if geometry.coords(i)[0] < half { p1 } else { p2 })
            .collect();
        Self::from_samples(geometry, samples)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn p_infinity(&self) -> f64 {
        self.p_infinity
    }

    /// Infimum over the finite region (`∞` if there is none).
    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    /// Supremum over the finite region (`∞` if there is none).
    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn with_p_infinity(mut self, p_infinity: f64) -> Result<Self> {
        if !(p_infinity >= 1.0) {
            return Err(Error::Domain(format!("p_infinity must lie in [1, inf], got {p_infinity}")));
        }
        self.p_infinity = p_infinity;
        Ok(self)
    }

    pub fn has_infinite_region(&self) -> bool {
        self.samples.iter().any(|p| p.is_infinite())
    }

    pub fn to_document(&self) -> GridDocument {
        let encode = |p: f64| if p.is_infinite() { INFINITY_SENTINEL } else { p };
        GridDocument {
            format_version: FORMAT_VERSION,
            dtype: DTYPE_EXPONENT.into(),
            dim: self.geometry.dim(),
            sizes: self.geometry.sizes().to_vec(),
            side: self.geometry.side(),
            samples: Samples::Real(self.samples.iter().map(|&p| encode(p)).collect()),
            p_infinity: Some(encode(self.p_infinity)),
        }
    }

    pub fn from_document(doc: GridDocument) -> Result<Self> {
        let geometry = doc.geometry(DTYPE_EXPONENT)?;
        let decode = |p: f64| if p == INFINITY_SENTINEL { f64::INFINITY } else { p };
        let samples: Vec<f64> = match doc.samples {
            Samples::Real(v) => v.into_iter().map(decode).collect(),
            Samples::Complex(_) => return Err(Error::Format("exponent samples must be single reals".into())),
        };
        match doc.p_infinity {
            Some(p) => Self::new(geometry, samples, decode(p)),
            None => Self::from_samples(geometry, samples),
        }
    }
}

fn harmonic_mean(samples: &[f64]) -> f64 {
    let inv: f64 = samples.iter().map(|p| 1.0 / p).sum::<f64>() / samples.len().max(1) as f64;
    if inv > 0.0 {
        1.0 / inv
    } else {
        f64::INFINITY
    }
}

pub fn write_exponent(path: impl AsRef<Path>, p: &VariableExponent) -> Result<()> {
    fs::write(path, p.to_document().to_json()?)?;
    Ok(())
}

pub fn read_exponent(path: impl AsRef<Path>) -> Result<VariableExponent> {
    VariableExponent::from_document(GridDocument::from_json(&fs::read_to_string(path)?)?)
}
