//! Parsing of `--function` and `--exponent` sources: a builder spec such as
//! `gaussian:0.1` or `sin:2.1,0.3`, or otherwise a path to a JSON file.

use std::path::Path;

use varlap::grid::{gaussian_bump, plane_wave, random_band_limited, read_grid};
use varlap::varlp::read_exponent;
use varlap::{Error, Geometry, GridFunction, Result, VariableExponent};

fn split(spec: &str) -> (&str, Vec<&str>) {
    match spec.split_once(':') {
        Some((name, args)) => (name, args.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()),
        None => (spec, Vec::new()),
    }
}

fn numbers<T: std::str::FromStr>(name: &str, args: &[&str]) -> Result<Vec<T>> {
    args.iter()
        .map(|a| a.parse().map_err(|_| Error::Precondition(format!("{name}: cannot parse argument {a:?}"))))
        .collect()
}

fn arity<T>(name: &str, v: Vec<T>, allowed: &[usize]) -> Result<Vec<T>> {
    if allowed.contains(&v.len()) {
        Ok(v)
    } else {
        Err(Error::Precondition(format!("{name} takes {allowed:?} arguments, got {}", v.len())))
    }
}

fn is_file(spec: &str) -> bool {
    Path::new(spec).is_file()
}

/// `gaussian[:width]` (centered), `random[:cutoff]`, `plane:k1,...,kn`,
/// `const[:value]`, or a grid file.
pub fn function(spec: &str, geom: &Geometry, seed: u64) -> Result<GridFunction> {
    if is_file(spec) {
        let f = read_grid(spec)?;
        if f.geometry() != geom {
            return Err(Error::GridMismatch(format!(
                "{spec} has sizes {:?} and side {}, expected {:?} and {}",
                f.geometry().sizes(),
                f.geometry().side(),
                geom.sizes(),
                geom.side()
            )));
        }
        return Ok(f);
    }
    let (name, args) = split(spec);
    match name {
        "gaussian" => {
            let w = arity(name, numbers::<f64>(name, &args)?, &[0, 1])?;
            let center = vec![geom.side() / 2.0; geom.dim()];
            gaussian_bump(geom, &center, w.first().copied().unwrap_or(0.1 * geom.side()))
        }
        "random" => {
            let c = arity(name, numbers::<usize>(name, &args)?, &[0, 1])?;
            let cutoff = c.first().copied().unwrap_or_else(|| (geom.sizes().iter().min().unwrap() / 4).max(1));
            random_band_limited(geom, seed, cutoff)
        }
        "plane" => {
            let k = arity(name, numbers::<i64>(name, &args)?, &[geom.dim()])?;
            plane_wave(geom, &k)
        }
        "const" => {
            let c = arity(name, numbers::<f64>(name, &args)?, &[0, 1])?;
            Ok(GridFunction::constant(geom.clone(), c.first().copied().unwrap_or(1.0).into()))
        }
        _ => Err(Error::Precondition(format!(
            "unknown function {spec:?}: expected gaussian[:w], random[:cutoff], plane:k.., const[:c] or an existing file"
        ))),
    }
}

/// `const:q`, `sin:mean,amp`, `step:p1,p2`, or an exponent file. `inf` is
/// accepted for any exponent value.
pub fn exponent(spec: &str, geom: &Geometry) -> Result<VariableExponent> {
    if is_file(spec) {
        return read_exponent(spec);
    }
    let (name, args) = split(spec);
    let v = numbers::<f64>(name, &args)?;
    match name {
        "const" => VariableExponent::constant(geom.clone(), arity(name, v, &[1])?[0]),
        "sin" => {
            let v = arity(name, v, &[2])?;
            VariableExponent::sinusoidal(geom.clone(), v[0], v[1])
        }
        "step" => {
            let v = arity(name, v, &[2])?;
            VariableExponent::step(geom.clone(), v[0], v[1])
        }
        _ => Err(Error::Precondition(format!(
            "unknown exponent {spec:?}: expected const:q, sin:mean,amp, step:p1,p2 or an existing file"
        ))),
    }
}
