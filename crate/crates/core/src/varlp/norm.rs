use super::VariableExponent;
use crate::error::{Error, Result};
use crate::grid::GridFunction;

const BISECTION_RTOL: f64 = 1e-13;
const MAX_STEPS: usize = 200;

fn check_geometry(f: &GridFunction, p: &VariableExponent) -> Result<()> {
    if f.geometry() != p.geometry() {
        return Err(Error::GridMismatch(format!(
            "function on {:?}, exponent on {:?}",
            f.geometry(),
            p.geometry()
        )));
    }
    Ok(())
}

fn modular_unchecked(mags: &[f64], p: &VariableExponent, lambda: f64) -> f64 {
    let cell = p.geometry().cell_volume();
    let mut integral = 0.0;
    let mut sup = 0.0f64;
    for (&m, &q) in mags.iter().zip(p.samples()) {
        let v = m / lambda;
        if q.is_infinite() {
            sup = sup.max(v);
        } else {
            integral += v.powf(q);
        }
    }
    integral * cell + sup
}

/// `ρ(f/λ) = Σ_{p<∞} (|f|/λ)^{p(x)} · cell + max_{p=∞} |f|/λ`.
pub fn modular(f: &GridFunction, p: &VariableExponent, lambda: f64) -> Result<f64> {
    check_geometry(f, p)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    Ok(modular_unchecked(&f.magnitudes(), p, lambda))
}

/// Luxemburg norm `inf{λ > 0 : ρ(f/λ) ≤ 1}` by bisection on `λ`.
///
/// Returns the upper end of the final bracket, so `ρ(f/‖f‖) ≤ 1` always holds.
pub fn luxemburg_norm(f: &GridFunction, p: &VariableExponent) -> Result<f64> {
    check_geometry(f, p)?;
    let mags = f.magnitudes();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let rho = |lambda: f64| modular_unchecked(&mags, p, lambda);
    let vol = p.geometry().volume();
    let guess = peak * if p.p_plus().is_finite() { 1f64.min(vol.powf(1.0 / p.p_plus())) } else { 1.0 };
    let (mut lo, mut hi) = (guess, guess);
    if rho(guess) > 1.0 {
        while rho(hi) > 1.0 {
            lo = hi;
            hi *= 2.0;
        }
    } else {
        while rho(lo) <= 1.0 {
            hi = lo;
            lo *= 0.5;
        }
    }
    for _ in 0..MAX_STEPS {
        if hi - lo <= BISECTION_RTOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if rho(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Conjugate exponent `p′ = p/(p−1)`, with `1 ↔ ∞`.
pub fn dual_exponent(p: &VariableExponent) -> VariableExponent {
    let dual = |q: f64| {
        if q == 1.0 {
            f64::INFINITY
        } else if q.is_infinite() {
            1.0
        } else {
            q / (q - 1.0)
        }
    };
    let samples = p.samples().iter().map(|&q| dual(q)).collect();
    VariableExponent::new(p.geometry().clone(), samples, dual(p.p_infinity()))
        .expect("conjugate of an exponent in [1, inf] stays in [1, inf]")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{random_band_limited, Geometry};
    use num_complex::Complex64;

    fn ones(g: &Geometry) -> GridFunction {
        GridFunction::constant(g.clone(), Complex64::new(1.0, 0.0))
    }

    #[test]
    fn modular_examples() {
        let unit = Geometry::cubic(2, 8, 1.0).unwrap();
        let p2 = VariableExponent::constant(unit.clone(), 2.0).unwrap();
        assert!((modular(&ones(&unit), &p2, 1.0).unwrap() - 1.0).abs() < 1e-14);

        let pinf = VariableExponent::constant(unit.clone(), f64::INFINITY).unwrap();
        assert_eq!(modular(&ones(&unit), &pinf, 2.0).unwrap(), 0.5);

        let two = Geometry::cubic(1, 16, 2.0).unwrap();
        let step = VariableExponent::step(two.clone(), 1.0, 2.0).unwrap();
        assert!((modular(&ones(&two), &step, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!(modular(&ones(&two), &step, 0.0).is_err());
        assert!(modular(&ones(&unit), &step, 1.0).is_err());
    }

    #[test]
    fn two_region_norm_is_golden_ratio() {
        let two = Geometry::cubic(1, 16, 2.0).unwrap();
        let step = VariableExponent::step(two.clone(), 1.0, 2.0).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((luxemburg_norm(&ones(&two), &step).unwrap() - golden).abs() < 1e-10);
    }

    #[test]
    fn constant_exponent_gives_classical_norm() {
        let g = Geometry::cubic(2, 16, 1.5).unwrap();
        let f = random_band_limited(&g, 4, 3).unwrap();
        for &q in &[1.0, 1.5, 2.0, 3.7] {
            let p = VariableExponent::constant(g.clone(), q).unwrap();
            let classical = (f.magnitudes().iter().map(|m| m.powf(q)).sum::<f64>() * g.cell_volume()).powf(1.0 / q);
            let got = luxemburg_norm(&f, &p).unwrap();
            assert!((got - classical).abs() < 1e-10 * classical, "q={q}: {got} vs {classical}");
        }
        let pinf = VariableExponent::constant(g.clone(), f64::INFINITY).unwrap();
        assert!((luxemburg_norm(&f, &pinf).unwrap() - f.max_norm()).abs() < 1e-10);
    }

    #[test]
    fn zero_function_has_zero_norm() {
        let g = Geometry::cubic(1, 8, 1.0).unwrap();
        let p = VariableExponent::constant(g.clone(), 2.0).unwrap();
        assert_eq!(luxemburg_norm(&GridFunction::zeros(g), &p).unwrap(), 0.0);
    }

    #[test]
    fn homogeneity() {
        let g = Geometry::cubic(1, 64, 1.0).unwrap();
        let f = random_band_limited(&g, 8, 10).unwrap();
        let p = VariableExponent::sinusoidal(g.clone(), 2.0, 0.5).unwrap();
        let a = luxemburg_norm(&f, &p).unwrap();
        let b = luxemburg_norm(&f.scale(Complex64::new(3.7, 0.0)), &p).unwrap();
        assert!((b - 3.7 * a).abs() < 1e-10 * b);
    }

    #[test]
    fn dual_examples() {
        let g = Geometry::cubic(1, 4, 1.0).unwrap();
        let p = VariableExponent::new(g.clone(), vec![2.0, 1.0, 3.0, f64::INFINITY], 2.0).unwrap();
        assert_eq!(dual_exponent(&p).samples(), &[2.0, f64::INFINITY, 1.5, 1.0]);
    }
}
