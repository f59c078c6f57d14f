use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::VariableExponent;
use crate::error::{Error, Result};

/// Largest grid the quadratic pair scan accepts.
pub const MAX_POINTS: usize = 64 * 64;

/// Brute-force estimates of the local log-Hölder constant `c1` and the decay
/// constant `c2` of `1/p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogHolderConstants {
    pub c1: f64,
    pub c2: f64,
}

impl LogHolderConstants {
    /// True when `c1` changed by at most `rtol` between a coarse and a fine
    /// sampling of the same exponent. A discontinuous exponent fails this,
    /// since its `c1` estimate grows like `log(e + N/L)`.
    pub fn is_refinement_stable(&self, fine: &LogHolderConstants, rtol: f64) -> bool {
        let scale = self.c1.abs().max(fine.c1.abs());
        scale == 0.0 || (fine.c1 - self.c1).abs() <= rtol * scale
    }
}

/// `c1 = max_{|x−y|<1/2} |1/p(x) − 1/p(y)| · log(e + 1/|x−y|)` over node pairs
/// (torus distance), and `c2 = max_x |1/p(x) − 1/p_∞| · log(e + |x|)` in the
/// centered chart.
pub fn log_holder_constants(p: &VariableExponent) -> Result<LogHolderConstants> {
    if p.has_infinite_region() {
        return Err(Error::Domain("log-Hölder constants need a finite exponent".into()));
    }
    let g = p.geometry();
    if g.len() > MAX_POINTS {
        return Err(Error::Precondition(format!(
            "log-Hölder scan limited to {MAX_POINTS} points, grid has {}",
            g.len()
        )));
    }
    let inv: Vec<f64> = p.samples().iter().map(|q| 1.0 / q).collect();
    let c1 = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for j in (i + 1)..g.len() {
                let d = g.torus_distance(i, j);
                if d < 0.5 {
                    best = best.max((inv[i] - inv[j]).abs() * (E + 1.0 / d).ln());
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    let inv_inf = 1.0 / p.p_infinity();
    let c2 = (0..g.len())
        .map(|i| {
            let r = g.centered_coords(i).iter().map(|x| x * x).sum::<f64>().sqrt();
            (inv[i] - inv_inf).abs() * (E + r).ln()
        })
        .fold(0.0, f64::max);
    Ok(LogHolderConstants { c1, c2 })
}
