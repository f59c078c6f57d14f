use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Geometry, GridFunction};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const DTYPE_COMPLEX: &str = "complex";

/// On-disk JSON container shared by grid functions and variable exponents.
///
/// Floats are written in shortest round-trip form, so reading back a written
/// document reproduces every sample bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub format_version: u32,
    #[serde(default = "default_dtype")]
    pub dtype: String,
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub side: f64,
    pub samples: Samples,
    /// Only used by exponent documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_infinity: Option<f64>,
}

fn default_dtype() -> String {
    DTYPE_COMPLEX.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Samples {
    Complex(Vec<[f64; 2]>),
    Real(Vec<f64>),
}

impl GridDocument {
    pub fn from_grid(f: &GridFunction) -> Self {
        let g = f.geometry();
        Self {
            format_version: FORMAT_VERSION,
            dtype: DTYPE_COMPLEX.into(),
            dim: g.dim(),
            sizes: g.sizes().to_vec(),
            side: g.side(),
            samples: Samples::Complex(f.samples().iter().map(|z| [z.re, z.im]).collect()),
            p_infinity: None,
        }
    }

    /// Validates the header and returns the geometry it describes.
    pub fn geometry(&self, expected_dtype: &str) -> Result<Geometry> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::Format(format!("unsupported format_version {}", self.format_version)));
        }
        if self.dtype != expected_dtype {
            return Err(Error::Format(format!("expected dtype {expected_dtype:?}, found {:?}", self.dtype)));
        }
        if self.dim != self.sizes.len() {
            return Err(Error::Format(format!("dim {} does not match sizes {:?}", self.dim, self.sizes)));
        }
        Geometry::new(self.sizes.clone(), self.side)
    }

    pub fn into_grid(self) -> Result<GridFunction> {
        let geom = self.geometry(DTYPE_COMPLEX)?;
        let samples = match self.samples {
            Samples::Complex(pairs) => pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
            Samples::Real(_) => return Err(Error::Format("grid samples must be [re, im] pairs".into())),
        };
        GridFunction::new(geom, samples)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

pub fn write_grid(path: impl AsRef<Path>, f: &GridFunction) -> Result<()> {
    fs::write(path, GridDocument::from_grid(f).to_json()?)?;
    Ok(())
}

pub fn read_grid(path: impl AsRef<Path>) -> Result<GridFunction> {
    GridDocument::from_json(&fs::read_to_string(path)?)?.into_grid()
}
