use std::io::Write;

use serde_json::json;
use varlap::grid::write_grid;
use varlap::mellin::{
    a_alpha, decay_exponent_fit_with, f_star, mellin_reconstruct_with, CoefficientForm, MellinSamples, MultiplierSpec,
    QuadratureParams,
};
use varlap::operators::{
    default_hl_radii, default_t_grid, geometric_grid, hardy_littlewood_maximal, norm_growth as growth,
    smoothing_maximal, spherical_maximal, SmoothingKind,
};
use varlap::varlp::{check_bound_hypotheses, write_exponent, Claim};
use varlap::wave::{
    a_priori_ratio, default_wave_t_grid, energy, fd_stability_bound, small_time_limit_error, wave_fd_oracle,
    wave_propagate, wave_trace, WaveConfig,
};
use varlap::{Error, Geometry, Result};

use crate::output::{num, sink, Config, Table};
use crate::source;
use crate::{
    finish, ClaimArg, DecayFitArgs, Failure, Form, GenArgs, GridArgs, HypothesesArgs, MaximalKind, MellinTableArgs,
    NormGrowthArgs, ReconstructArgs, Spacing, SphericalMaxArgs, TimeArgs, WaveDemoArgs,
};

type Outcome = std::result::Result<(), Failure>;

fn form(f: Form) -> CoefficientForm {
    match f {
        Form::Displayed => CoefficientForm::Displayed,
        Form::Exact => CoefficientForm::Exact,
    }
}

fn form_name(f: Form) -> &'static str {
    match f {
        Form::Displayed => "displayed",
        Form::Exact => "exact",
    }
}

fn linear(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo < hi) {
        return Err(Error::Precondition(format!("need at least two points and lo < hi, got {count} on [{lo}, {hi}]")));
    }
    Ok((0..count).map(|j| lo + (hi - lo) * j as f64 / (count - 1) as f64).collect())
}

fn geometric(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo > 0.0 && lo < hi) {
        return Err(Error::Precondition(format!("geometric spacing needs 0 < lo < hi and two points, got {count} on [{lo}, {hi}]")));
    }
    Ok(geometric_grid(lo, hi, count))
}

fn geometry(g: &GridArgs) -> Result<Geometry> {
    Geometry::cubic(g.dim, g.size, g.side)
}

fn grid_config(c: &mut Config, g: &GridArgs) {
    c.set("dim", g.dim).set("size", g.size).set("side", g.side).set("seed", g.seed);
}

fn t_grid(t: &TimeArgs, default: Vec<f64>) -> Result<Vec<f64>> {
    if t.t_min.is_none() && t.t_max.is_none() && t.t_points.is_none() {
        return Ok(default);
    }
    let lo = t.t_min.unwrap_or(default[0]);
    let hi = t.t_max.unwrap_or(default[default.len() - 1]);
    match t.t_points.unwrap_or(default.len()) {
        1 if lo > 0.0 => Ok(vec![lo]),
        k => geometric(lo, hi, k),
    }
}

pub fn mellin_table(a: MellinTableArgs) -> Outcome {
    let spec = MultiplierSpec::new(a.alpha, a.dim)?;
    let us = linear(a.u_min, a.u_max, a.u_points)?;
    let params = QuadratureParams { s_max: a.s_max, steps: a.steps, ..QuadratureParams::default() };
    let samples = MellinSamples::new(&spec, params)?;
    let mut cfg = Config::new("mellin-table");
    cfg.set("dim", a.dim)
        .set("alpha", a.alpha)
        .set("u_min", a.u_min)
        .set("u_max", a.u_max)
        .set("u_points", a.u_points)
        .set("form", form_name(a.form))
        .set("s_max", a.s_max)
        .set("steps", a.steps);
    let mut table = Table::create(
        a.out.out.as_deref(),
        &cfg,
        &["u", "re_closed", "im_closed", "abs_closed", "re_quad", "im_quad", "abs_quad", "rel_diff"],
    )?;
    let mut warnings = Vec::new();
    for &u in &us {
        let c = a_alpha(form(a.form), u, &spec)?;
        let q = samples.coefficient(u);
        if let Some(w) = q.warning {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        let rel = (c - q.value).norm() / q.value.norm();
        table.row([u, c.re, c.im, c.norm(), q.value.re, q.value.im, q.value.norm(), rel].map(num))?;
    }
    table.finish()?;
    finish(warnings, a.out.strict)
}

pub fn decay_fit(a: DecayFitArgs) -> Outcome {
    let spec = MultiplierSpec::new(a.alpha, a.dim)?;
    let slope = decay_exponent_fit_with(form(a.form), &spec, a.u_min, a.u_max, a.u_points)?;
    let expected = -(a.alpha + a.dim as f64 / 2.0);
    let report = json!({
        "command": "decay-fit",
        "version": varlap::VERSION,
        "dim": a.dim,
        "alpha": a.alpha,
        "form": form_name(a.form),
        "u_min": a.u_min,
        "u_max": a.u_max,
        "u_points": a.u_points,
        "slope": slope,
        "expected": expected,
        "deviation": slope - expected,
    });
    let mut out = sink(a.out.out.as_deref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
    out.flush()?;
    let mut warnings = Vec::new();
    if (slope - expected).abs() > 0.1 {
        warnings.push(format!("slope {slope} deviates from {expected} by more than 0.1"));
    }
    finish(warnings, a.out.strict)
}

pub fn reconstruct(a: ReconstructArgs) -> Outcome {
    let spec = MultiplierSpec::new(a.alpha, a.dim)?;
    let levels = geometric(a.u_min, a.u_max, a.u_points)?;
    let target = f_star(a.lambda, &spec);
    let mut cfg = Config::new("reconstruct");
    cfg.set("dim", a.dim)
        .set("alpha", a.alpha)
        .set("lambda", a.lambda)
        .set("du", a.du)
        .set("u_min", a.u_min)
        .set("u_max", a.u_max)
        .set("u_points", a.u_points)
        .set("form", form_name(a.form));
    let mut table = Table::create(a.out.out.as_deref(), &cfg, &["u_max", "re_value", "im_value", "target", "abs_error"])?;
    let mut errors = Vec::new();
    for &u_max in &levels {
        let v = mellin_reconstruct_with(form(a.form), a.lambda, &spec, u_max, a.du)?;
        let err = (v.re - target).abs();
        errors.push(err);
        table.row([u_max, v.re, v.im, target, err].map(num))?;
    }
    table.finish()?;
    let mut warnings = Vec::new();
    if errors.windows(2).any(|w| w[1] > 1.1 * w[0]) {
        warnings.push("reconstruction error does not decrease with u_max".to_string());
    }
    finish(warnings, a.out.strict)
}

fn u_values(a: &NormGrowthArgs) -> Result<Vec<f64>> {
    match a.spacing {
        Spacing::Linear => linear(a.u_min, a.u_max, a.u_points),
        Spacing::Log if a.u_min == 0.0 => {
            let mut v = vec![0.0];
            v.extend(geometric(1.0, a.u_max, a.u_points - 1)?);
            Ok(v)
        }
        Spacing::Log => geometric(a.u_min, a.u_max, a.u_points),
    }
}

pub fn norm_growth(a: NormGrowthArgs) -> Outcome {
    let geom = geometry(&a.grid)?;
    let f = source::function(&a.function, &geom, a.grid.seed)?;
    let p = source::exponent(&a.exponent, &geom)?;
    let us = u_values(&a)?;
    let g = growth(&f, &p, &us)?;
    let mut cfg = Config::new("norm-growth");
    grid_config(&mut cfg, &a.grid);
    cfg.set("function", &a.function)
        .set("exponent", &a.exponent)
        .set("u_min", a.u_min)
        .set("u_max", a.u_max)
        .set("u_points", a.u_points)
        .set("spacing", format!("{:?}", a.spacing).to_lowercase());
    let mut table = Table::create(a.out.out.as_deref(), &cfg, &["u", "ratio"])?;
    for (u, r) in g.u.iter().zip(&g.ratios) {
        table.row([num(*u), num(*r)])?;
    }
    table.finish()?;
    let bound = a.grid.dim as f64 / 2.0 + 1.0;
    let mut warnings = Vec::new();
    if g.slope > bound {
        warnings.push(format!("log-log slope {} exceeds n/2 + 1 = {bound}", g.slope));
    }
    eprintln!("slope: {}", g.slope);
    finish(warnings, a.out.strict)
}

pub fn spherical_max(a: SphericalMaxArgs) -> Outcome {
    let geom = geometry(&a.grid)?;
    let f = source::function(&a.function, &geom, a.grid.seed)?;
    let mut cfg = Config::new("spherical-max");
    grid_config(&mut cfg, &a.grid);
    cfg.set("function", &a.function).set("kind", format!("{:?}", a.kind).to_lowercase());
    let (values, params, argmax) = match a.kind {
        MaximalKind::Hl => {
            let radii = default_hl_radii(&geom);
            (hardy_littlewood_maximal(&f, &radii)?.real_parts(), radii, None)
        }
        kind => {
            let ts = t_grid(&a.time, default_t_grid(&geom))?;
            let m = match kind {
                MaximalKind::Spherical => {
                    cfg.set("alpha", a.alpha);
                    spherical_maximal(&f, a.alpha, &ts)?
                }
                MaximalKind::Heat => smoothing_maximal(&f, SmoothingKind::Heat, &ts)?,
                _ => smoothing_maximal(&f, SmoothingKind::Poisson, &ts)?,
            };
            (m.values, ts, Some(m.argmax_t))
        }
    };
    cfg.set("t_min", params.iter().cloned().find(|&t| t > 0.0).unwrap_or(0.0))
        .set("t_max", params[params.len() - 1])
        .set("t_points", params.len());
    if let Some(path) = &a.grid_out {
        write_grid(path, &varlap::GridFunction::from_real(geom.clone(), &values)?)?;
    }
    let mut header: Vec<String> = vec!["index".into()];
    header.extend((0..geom.dim()).map(|j| format!("x{j}")));
    header.extend(["f".into(), "maximal".into(), "argmax_t".into()]);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table = Table::create(a.out.out.as_deref(), &cfg, &header)?;
    let fv = f.real_parts();
    for i in 0..geom.len() {
        let mut row = vec![i.to_string()];
        row.extend(geom.coords(i).into_iter().map(num));
        row.push(num(fv[i]));
        row.push(num(values[i]));
        row.push(argmax.as_ref().map(|am| num(params[am[i]])).unwrap_or_default());
        table.row(row)?;
    }
    table.finish()?;
    finish(Vec::new(), a.out.strict)
}

pub fn wave_demo(a: WaveDemoArgs) -> Outcome {
    let geom = geometry(&a.grid)?;
    let f = source::function(&a.function, &geom, a.grid.seed)?;
    let cfg = WaveConfig::new(geom.dim(), t_grid(&a.time, default_wave_t_grid(&geom))?)?;
    let rows = wave_trace(&f, &cfg)?;

    let dt = a.dt.unwrap_or(0.5 * fd_stability_bound(&geom));
    let exact = wave_propagate(&f, a.fd_time, &cfg)?;
    let fd = wave_fd_oracle(&f, a.fd_time, dt)?;
    let fd_err = fd.sub(&exact)?.l2_norm();

    let p = source::exponent(&a.exponent, &geom)?;
    let a_priori = a_priori_ratio(&f, &p, &cfg);
    let small: Vec<(f64, f64)> =
        [1e-1, 1e-2, 1e-3].iter().map(|&t| Ok((t, small_time_limit_error(&f, &cfg, t)?))).collect::<Result<_>>()?;
    let e0 = energy(&f, 0.0, &cfg)?;
    let drift = rows.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max) / e0.max(f64::MIN_POSITIVE);

    let mut conf = Config::new("wave-demo");
    grid_config(&mut conf, &a.grid);
    conf.set("function", &a.function)
        .set("exponent", &a.exponent)
        .set("t_min", cfg.t_grid()[0])
        .set("t_max", cfg.t_grid()[cfg.t_grid().len() - 1])
        .set("t_points", cfg.t_grid().len())
        .set("fd_time", a.fd_time)
        .set("dt", dt);
    let mut table = Table::create(a.out.out.as_deref(), &conf, &["t", "l2", "max", "energy"])?;
    for r in &rows {
        table.row([r.t, r.l2, r.max, r.energy].map(num))?;
    }
    table.finish()?;

    let mut warnings = Vec::new();
    if cfg.is_smoke_only() {
        warnings.push("dimension 1 lies outside the range of the maximal estimates".to_string());
    }
    if drift > 1e-8 {
        warnings.push(format!("relative energy drift {drift:e} exceeds 1e-8"));
    }
    let (ratio, ratio_error) = match a_priori {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let summary = json!({
        "command": "wave-demo",
        "version": varlap::VERSION,
        "n": cfg.n(),
        "alpha": cfg.alpha(),
        "c_n": cfg.c_n(),
        "fd": { "t": a.fd_time, "dt": dt, "stability_bound": fd_stability_bound(&geom), "l2_error": fd_err },
        "a_priori_ratio": ratio,
        "a_priori_error": ratio_error,
        "small_time": small.iter().map(|(t, e)| json!({ "t": t, "error": e })).collect::<Vec<_>>(),
        "energy_relative_drift": drift,
    });
    if let Some(path) = &a.report {
        let mut out = sink(Some(path))?;
        writeln!(out, "{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?)?;
        out.flush()?;
    }
    finish(warnings, a.out.strict)
}

pub fn hypotheses(a: HypothesesArgs) -> Outcome {
    let geom = Geometry::cubic(a.dim, a.size, a.side)?;
    let p = source::exponent(&a.exponent, &geom)?;
    let claim = match a.claim {
        ClaimArg::Thm32 => Claim::Thm32,
        ClaimArg::Thm34 => Claim::Thm34,
        ClaimArg::Cor35 => Claim::Cor35,
        ClaimArg::Cor36Wave => Claim::Cor36Wave,
    };
    let report = check_bound_hypotheses(&p, a.alpha, a.dim, claim);
    let text = serde_json::to_string_pretty(&report).map_err(Error::from)?;
    let mut stdout = sink(None)?;
    writeln!(stdout, "{}", report.chain())?;
    for c in report.failures() {
        writeln!(stdout, "failed: {} ({} {} {})", c.label, c.lhs, c.relation, c.rhs)?;
    }
    if a.json {
        writeln!(stdout, "{text}")?;
    }
    stdout.flush()?;
    if let Some(path) = &a.out {
        let mut out = sink(Some(path))?;
        writeln!(out, "{text}")?;
        out.flush()?;
    }
    Ok(())
}

pub fn gen(a: GenArgs) -> Outcome {
    let geom = geometry(&a.grid)?;
    match (&a.function, &a.exponent) {
        (Some(spec), _) => write_grid(&a.out, &source::function(spec, &geom, a.grid.seed)?)?,
        (None, Some(spec)) => write_exponent(&a.out, &source::exponent(spec, &geom)?)?,
        (None, None) => return Err(Error::Precondition("one of --function or --exponent is required".into()).into()),
    }
    Ok(())
}
