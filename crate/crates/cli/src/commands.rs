use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::json;

use denomlab::analytic::{
    eta_density, hall_h, moment_m_closed, moment_m_quadrature, parse_complex, scale_s_to_l, MomentEval,
};
use denomlab::farey::{farey_count, farey_stream_nd};
use denomlab::resonance::resonance_scaling_experiment;
use denomlab::stats::format::g12;
use denomlab::stats::histogram::svg_chart;
use denomlab::stats::plan::NumOrText;
use denomlab::stats::{
    distance_moment_experiment, distance_moment_has_limit, distance_values, model_density_1d,
    pigeonhole_experiment, qmin_distribution_experiment, qmin_moment_experiment, region_length_1d,
    void_statistic_experiment, CountHistogram, DensityHistogram, PlanSpec, SamplingMode,
};
use denomlab::{qmin, Error, FareyLevel, Norm, QueryRegion, Rational, RegionSpec};

use crate::args::{AnalyticArgs, AnalyticFn, Cli, Command, ExperimentKind, FareyArgs, Format, MomentMethodArg};
use crate::args::{PlanArgs, QminArgs, ResonanceArgs};
use crate::output::{complex, complex_json, emit, json_text, write_atomic, Csv};

#[derive(Debug)]
pub enum Failure {
    /// Bad flags, plans or argument values.
    Usage(String),
    /// Failures during the computation or while writing results.
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded(_) | Error::NoSamples | Error::EndOfSequence => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

/// Main result in every format the command supports, plus an optional chart.
struct Report {
    csv: Option<String>,
    json: Option<String>,
    svg: Option<String>,
    default: Format,
}

pub fn run(cli: &Cli) -> Res<()> {
    let want_svg = cli.svg.is_some() || cli.format == Some(Format::Svg);
    let report = match &cli.command {
        Command::Qmin(a) => qmin_cmd(a)?,
        Command::Farey(a) => farey_cmd(a)?,
        Command::Analytic(a) => analytic_cmd(a)?,
        Command::Experiment { kind } => experiment_cmd(kind, want_svg)?,
        Command::Resonance(a) => resonance_cmd(a, want_svg)?,
    };
    let format = cli.format.unwrap_or(report.default);
    let main = match format {
        Format::Csv => report.csv.as_ref(),
        Format::Json => report.json.as_ref(),
        Format::Svg => report.svg.as_ref(),
    };
    let Some(main) = main else {
        return Err(Failure::Usage(format!("this command has no {format:?} output").to_lowercase()));
    };
    if let Some(path) = &cli.svg {
        let svg = report.svg.as_ref().ok_or_else(|| Failure::Usage("this command has no SVG chart".into()))?;
        write_atomic(path, svg)?;
    }
    emit(cli.out.as_deref().map(Path::new), main)?;
    Ok(())
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn rational(flag: &str, text: &str) -> Res<Rational> {
    Rational::parse(text.trim()).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn rational_list(flag: &str, text: &str) -> Res<Vec<Rational>> {
    text.split(',').map(|t| rational(flag, t)).collect()
}

fn float_list(flag: &str, text: &str) -> Res<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::Usage(format!("--{flag}: `{t}` is not a number")))
        })
        .collect()
}

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn qmin_cmd(a: &QminArgs) -> Res<Report> {
    let x = rational_list("x", &a.x)?;
    let delta = rational("delta", &a.delta)?;
    let region = match &a.region {
        Some(t) => RegionSpec::parse(t)?,
        None => RegionSpec::unit_box(x.len()),
    };
    let query = QueryRegion::new(&region, x, delta)?;
    let ans = qmin(&query)?;
    let json = json_text(&serde_json::to_value(&ans).expect("answer serializes"));
    let mut csv = Csv::new(&["q", "witness"]);
    csv.row(&[ans.q.to_string(), csv_cell(&ans.witness.to_string())]);
    Ok(Report { csv: Some(csv.finish()), json: Some(json), svg: None, default: Format::Json })
}

fn farey_cmd(a: &FareyArgs) -> Res<Report> {
    let level = FareyLevel::new(a.n, rational("Q", &a.q)?)?;
    if a.count_only {
        let c = farey_count(&level)?;
        let mut csv = Csv::new(&["n", "Q", "count", "sigma_Q", "ratio"]);
        csv.row(&[a.n.to_string(), level.level.to_string(), c.count.to_string(), g12(c.sigma_q), g12(c.ratio)]);
        let json = json!({
            "n": a.n, "Q": level.level, "count": c.count.to_string(), "sigma_Q": c.sigma_q, "ratio": c.ratio,
        });
        return Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg: None, default: Format::Csv });
    }
    let header: Vec<String> = std::iter::once("q".to_string()).chain((1..=a.n).map(|i| format!("p{i}"))).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = Csv::new(&header);
    let mut items = Vec::new();
    farey_stream_nd(&level, |p, q| {
        let mut cells = vec![q.to_string()];
        cells.extend(p.iter().map(u64::to_string));
        csv.row(&cells);
        items.push(json!({ "q": q, "p": p }));
    });
    let json = json_text(&serde_json::Value::Array(items));
    Ok(Report { csv: Some(csv.finish()), json: Some(json), svg: None, default: Format::Csv })
}

fn real_arg(text: &str) -> Res<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Failure::Usage(format!("--at: `{text}` is not a real number")))
}

fn eta_branch(s: f64) -> &'static str {
    if s <= 1.0 {
        "s<=1"
    } else if s <= 2.0 {
        "1<=s<=2"
    } else {
        "s>=2"
    }
}

fn analytic_cmd(a: &AnalyticArgs) -> Res<Report> {
    if a.method.is_some() && a.function != AnalyticFn::Moment {
        return Err(Failure::Usage("--method applies only to --fn M".into()));
    }
    let (name, input, value, label_key, label): (&str, serde_json::Value, Complex64, &str, &str) = match a.function {
        AnalyticFn::Hall => {
            let s = real_arg(&a.at)?;
            let h = hall_h(s)?;
            ("H", json!(s), Complex64::new(h.value, 0.0), "branch", h.branch.label())
        }
        AnalyticFn::Eta => {
            let s = real_arg(&a.at)?;
            ("eta", json!(s), Complex64::new(eta_density(s)?, 0.0), "branch", eta_branch(s))
        }
        AnalyticFn::Moment => {
            let alpha = parse_complex(&a.at)?;
            let eval: MomentEval = match a.method {
                Some(MomentMethodArg::Quad) => moment_m_quadrature(alpha)?,
                _ => moment_m_closed(alpha)?,
            };
            let input = if alpha.im == 0.0 { json!(alpha.re) } else { json!(a.at.trim()) };
            ("M", input, eval.value, "method", eval.method.label())
        }
    };
    let is_complex = a.function == AnalyticFn::Moment && parse_complex(&a.at).map(|z| z.im != 0.0).unwrap_or(false);
    let mut obj = serde_json::Map::new();
    obj.insert("fn".into(), json!(name));
    obj.insert("input".into(), input);
    obj.insert("value".into(), complex_json(value, is_complex));
    obj.insert(label_key.into(), json!(label));
    let mut csv = Csv::new(&["fn", "input", "value", label_key]);
    csv.row(&[name.into(), a.at.trim().into(), complex(value), label.into()]);
    Ok(Report {
        csv: Some(csv.finish()),
        json: Some(json_text(&serde_json::Value::Object(obj))),
        svg: None,
        default: Format::Json,
    })
}

fn load_plan(a: &PlanArgs) -> Res<PlanSpec> {
    let mut spec = match &a.plan {
        None => PlanSpec::default(),
        Some(p) => {
            let text = if p.trim_start().starts_with('{') {
                p.clone()
            } else {
                std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("--plan {p}: {e}")))?
            };
            PlanSpec::from_json(&text)?
        }
    };
    let mut errors = Vec::new();
    macro_rules! set {
        ($field:ident, $flag:expr, $val:expr, $parse:expr) => {
            if let Some(v) = $val {
                match $parse(v) {
                    Ok(x) => spec.$field = Some(x),
                    Err(e) => errors.push(format!("--{}: {}", $flag, e)),
                }
            }
        };
    }
    let rat = |v: &String| Rational::parse(v.trim()).map_err(|e| e.to_string());
    let region = |v: &String| RegionSpec::parse(v.trim()).map_err(|e| e.to_string());
    if let Some(n) = a.n {
        spec.n = Some(n);
    }
    set!(mode, "mode", &a.mode, |v: &String| SamplingMode::from_str(v.trim()).map_err(|e| e.to_string()));
    set!(delta, "delta", &a.delta, rat);
    if let Some(nn) = a.grid_n {
        spec.grid_n = Some(nn);
    }
    set!(x0, "x0", &a.x0, |v: &String| v.split(',').map(|t| Rational::parse(t.trim())).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string()));
    set!(region, "region", &a.region, region);
    set!(domain, "D", &a.domain, region);
    if let Some(s) = a.samples {
        spec.samples = Some(s);
    }
    if let Some(s) = a.seed {
        spec.seed = Some(s);
    }
    set!(c, "c", &a.c, rat);
    set!(level, "Q", &a.level, rat);
    if let Some(s) = a.s {
        spec.s = Some(s);
    }
    if let Some(l) = a.l {
        spec.l = Some(l);
    }
    set!(side, "side", &a.side, rat);
    set!(alpha, "alpha", &a.alpha, |v: &String| parse_complex(v).map(|_| NumOrText::Text(v.clone())).map_err(|e| e.to_string()));
    set!(beta, "beta", &a.beta, |v: &String| parse_complex(v).map(|_| NumOrText::Text(v.clone())).map_err(|e| e.to_string()));
    set!(norm, "norm", &a.norm, |v: &String| Norm::from_str(v.trim()).map_err(|e| e.to_string()));
    set!(l_grid, "L-grid", &a.l_grid, |v: &String| float_list("L-grid", v).map_err(|e| match e {
        Failure::Usage(m) | Failure::Runtime(m) => m,
    }));
    if errors.is_empty() {
        Ok(spec)
    } else {
        Err(Failure::Usage(format!("invalid plan: {}", errors.join("; "))))
    }
}

fn default_l_grid() -> Vec<f64> {
    (0..=40).map(|i| i as f64 / 10.0).collect()
}

fn count_chart(title: &str, h: &CountHistogram) -> String {
    let bars: Vec<(f64, f64, f64)> =
        h.rows().iter().map(|&(k, _, f, _)| (k as f64 - 0.4, k as f64 + 0.4, f)).collect();
    svg_chart(title, &bars, None)
}

fn experiment_cmd(kind: &ExperimentKind, want_svg: bool) -> Res<Report> {
    match kind {
        ExperimentKind::QminDist(a) => {
            let spec = load_plan(a)?;
            let (plan, warnings) = spec.experiment_plan()?;
            warnings.iter().for_each(|w| warn(w));
            let grid = spec.l_grid.clone().unwrap_or_else(default_l_grid);
            let d = qmin_distribution_experiment(&plan, &grid)?;
            let mut csv = Csv::new(&["L", "empirical_survival", "model_survival"]);
            for r in &d.rows {
                csv.row(&[g12(r.l), g12(r.empirical_survival), r.model_survival.map(g12).unwrap_or_default()]);
            }
            let json = json!({
                "n": plan.n, "mode": plan.mode, "delta": plan.delta, "samples": d.q.len(),
                "rows": d.rows, "scaled": d.scaled.values(),
            });
            let svg = if want_svg {
                let vals = d.scaled.values();
                let hi = d.scaled.quantile(0.99).max(1.0) * 1.25;
                let hist = DensityHistogram::new(vals, a.bins, Some((0.0, hi)))?;
                let model = if plan.n == 1 { model_density_1d(&plan.region) } else { None };
                let title = format!("rescaled smallest denominator, n = {}", plan.n);
                Some(hist.to_svg(&title, model.as_ref().map(|f| f as &dyn Fn(f64) -> f64)))
            } else {
                None
            };
            Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg, default: Format::Csv })
        }
        ExperimentKind::QminMoment(a) => {
            let spec = load_plan(a)?;
            let (plan, warnings) = spec.experiment_plan()?;
            let alpha = spec.alpha()?;
            warnings.iter().for_each(|w| warn(w));
            let m = qmin_moment_experiment(&plan, alpha)?;
            let model = if plan.n == 1 {
                region_length_1d(&plan.region).and_then(|len| {
                    moment_m_closed(alpha).ok().map(|e| e.value * (-alpha / 2.0 * len.ln()).exp())
                })
            } else {
                None
            };
            let mut csv = Csv::new(&["alpha", "samples", "moment_re", "moment_im", "model_re", "model_im"]);
            csv.row(&[
                complex(alpha),
                plan.points.len().to_string(),
                g12(m.re),
                g12(m.im),
                model.map(|z| g12(z.re)).unwrap_or_default(),
                model.map(|z| g12(z.im)).unwrap_or_default(),
            ]);
            let json = json!({
                "alpha": complex(alpha), "n": plan.n, "mode": plan.mode, "delta": plan.delta,
                "samples": plan.points.len(), "moment": complex_json(m, true),
                "model": model.map(|z| complex_json(z, true)),
            });
            Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg: None, default: Format::Csv })
        }
        ExperimentKind::Void(a) => {
            let spec = load_plan(a)?;
            let plan = spec.void_plan()?;
            let h = void_statistic_experiment(&plan)?;
            let n = plan.level.dim;
            let model = if n == 1 {
                region_length_1d(&plan.region)
                    .map(|len| denomlab::analytic::eta_survival(scale_s_to_l(plan.s, 1) * len.sqrt()))
            } else {
                None
            };
            let mut csv = Csv::new(&["k", "samples", "frequency", "stderr", "model"]);
            for (k, c, f, e) in h.rows() {
                let m = if k == 0 { model.map(g12).unwrap_or_default() } else { String::new() };
                csv.row(&[k.to_string(), c.to_string(), g12(f), g12(e), m]);
            }
            let rows: Vec<_> = h
                .rows()
                .iter()
                .map(|&(k, c, f, e)| json!({"k": k, "samples": c, "frequency": f, "stderr": e}))
                .collect();
            let json = json!({
                "n": n, "Q": plan.level.level, "s": plan.s, "scale": plan.scale, "samples": h.total,
                "rows": rows, "model_void": model,
            });
            let svg = want_svg.then(|| count_chart(&format!("Farey points in a random region, s = {}", g12(plan.s)), &h));
            Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg, default: Format::Csv })
        }
        ExperimentKind::Pigeonhole(a) => {
            let spec = load_plan(a)?;
            let plan = spec.pigeonhole_plan()?;
            let h = pigeonhole_experiment(&plan)?;
            if h.tiles && !h.tiling_identity_holds() {
                return Err(Failure::Runtime(format!(
                    "tiling identity violated: sum k count(k) = {} but #F_Q = {}",
                    h.cells.weighted_total(),
                    h.farey_total
                )));
            }
            let mut csv = Csv::new(&["k", "cells", "frequency", "stderr"]);
            for (k, c, f, e) in h.cells.rows() {
                csv.row(&[k.to_string(), c.to_string(), g12(f), g12(e)]);
            }
            let rows: Vec<_> = h
                .cells
                .rows()
                .iter()
                .map(|&(k, c, f, e)| json!({"k": k, "cells": c, "frequency": f, "stderr": e}))
                .collect();
            let json = json!({
                "n": plan.level.dim, "Q": plan.level.level, "N": plan.grid_n, "side": plan.side,
                "tiles": h.tiles, "farey_total": h.farey_total.to_string(),
                "weighted_total": h.cells.weighted_total().to_string(), "rows": rows,
            });
            let svg = want_svg.then(|| count_chart(&format!("Farey points per cell, N = {}", plan.grid_n), &h.cells));
            Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg, default: Format::Csv })
        }
        ExperimentKind::DistMoment(a) => {
            let spec = load_plan(a)?;
            let plan = spec.distance_plan()?;
            let n = plan.level.dim;
            if !distance_moment_has_limit(plan.beta, n) {
                warn(&format!("|Re beta| >= {n}: the normalised moment has no limit as Q grows"));
            }
            let m = distance_moment_experiment(&plan)?;
            let mut csv = Csv::new(&["beta", "Q", "samples", "moment_re", "moment_im", "has_limit"]);
            csv.row(&[
                complex(plan.beta),
                plan.level.level.to_string(),
                plan.points.len().to_string(),
                g12(m.re),
                g12(m.im),
                distance_moment_has_limit(plan.beta, n).to_string(),
            ]);
            let json = json!({
                "beta": complex(plan.beta), "n": n, "Q": plan.level.level, "norm": plan.norm,
                "samples": plan.points.len(), "moment": complex_json(m, true),
                "has_limit": distance_moment_has_limit(plan.beta, n),
            });
            let svg = if want_svg {
                let f = plan.level.normalization().sigma_q.powf(1.0 / n as f64);
                let vals: Vec<f64> = distance_values(&plan)?.iter().map(|d| d * f).collect();
                let hist = DensityHistogram::new(&vals, a.bins, None)?;
                Some(hist.to_svg("rescaled distance to the Farey fractions", None))
            } else {
                None
            };
            Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg, default: Format::Csv })
        }
    }
}

fn resonance_cmd(a: &ResonanceArgs, want_svg: bool) -> Res<Report> {
    let rhos = rational_list("rho", &a.rho)?;
    if let Some(r) = rhos.iter().find(|r| !r.is_positive()) {
        return Err(Failure::Usage(format!("--rho: {r} must be positive")));
    }
    let res = resonance_scaling_experiment(a.n, &rhos, a.samples, a.seed)?;
    let mut csv = Csv::new(&["rho", "q10", "q50", "q90", "slope_running"]);
    for r in &res.rows {
        if r.censored > 0 {
            warn(&format!("rho = {}: {} samples reached the order cap and count as infinite", r.rho, r.censored));
        }
        csv.row(&[r.rho.to_string(), g12(r.q10), g12(r.q50), g12(r.q90), r.slope_running.map(g12).unwrap_or_default()]);
    }
    let json = json!({
        "n": res.n, "samples": res.samples, "rows": res.rows, "slope": res.slope(),
        "reference_slope": -1.0 / (res.n as f64 + 1.0),
    });
    let svg = if want_svg && !res.rows.is_empty() {
        let last = res.rows.len() - 1;
        let vals: Vec<f64> = res.rescaled(last).into_iter().filter(|v| v.is_finite()).collect();
        let hist = DensityHistogram::new(&vals, a.bins, None)?;
        Some(hist.to_svg(&format!("rescaled minimal resonance order, rho = {}", res.rows[last].rho), None))
    } else {
        None
    };
    Ok(Report { csv: Some(csv.finish()), json: Some(json_text(&json)), svg, default: Format::Csv })
}
