//! One function per CLI subcommand. Each returns a [`Report`] holding CSV
//! tables, a JSON summary and the threshold checks that set the exit code.

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde_json::json;
use talbot_core::bounds::{self, ratio_f64, BoundValue, Q};
use talbot_core::dd::DoubleDouble;
use talbot_core::dispersion::DispersionRelation;
use talbot_core::evolution::{evolve_slice, quantize_reconstruct, quantize_verify, slice_terms, truncated_modes, SliceSpec};
use talbot_core::expsum::{self, BlockSpec, Sign, SweepOptions, Weight};
use talbot_core::fit::log_log_fit;
use talbot_core::fractal::{besov_profile, box_dimension_band, box_dimension, holder_exponent, holder_exponent_band};
use talbot_core::linesum::TrigSum;
use talbot_core::nonlinear::{self, Equation, KdvScheme};
use talbot_core::poly::IntPoly;

use crate::config::ExperimentConfig;
use crate::report::{num, Check, Report, Table};
use crate::Failure;

pub const DEFAULT_SWEEP_SCALES: [u64; 7] = [64, 128, 256, 512, 1024, 2048, 4096];
pub const DEFAULT_L4_SCALES: [u64; 3] = [16, 32, 64];
pub const MAX_SAMPLES: usize = 1 << 24;

fn limit(cfg: &ExperimentConfig, name: &str, default: Option<f64>) -> Option<f64> {
    cfg.threshold(name).or(default)
}

fn push_range(report: &mut Report, cfg: &ExperimentConfig, name: &str, value: f64, min: Option<f64>, max: Option<f64>) {
    let min = limit(cfg, &format!("{name}_min"), min);
    let max = limit(cfg, &format!("{name}_max"), max);
    if min.is_some() || max.is_some() {
        report.checks.push(Check::within(name, value, min, max));
    }
}

fn bound_json(v: BoundValue) -> serde_json::Value {
    let (lo, hi) = v.to_f64();
    json!({ "exact": v.to_string(), "lower": lo, "upper": hi })
}

fn dd_ratio(x: DoubleDouble) -> Option<Q> {
    // Accept only values that are short decimals, as the grammar produces.
    for den in [1i64, 2, 3, 4, 5, 6, 8, 10, 100, 1000] {
        let n = (x.to_f64() * den as f64).round();
        if (n / den as f64 - x.to_f64()).abs() < 1e-15 {
            return Some(Ratio::new(n as i64, den));
        }
    }
    None
}

/// Predicted sup exponent of a dyadic block along a horizontal line.
pub fn predicted_sup_exponent(rel: &DispersionRelation) -> Option<Q> {
    match rel {
        DispersionRelation::Polynomial(p) => bounds::weyl_exponent(p.degree() as u32).ok().map(|w| Q::from_integer(1) - w),
        DispersionRelation::FractionalPower(a) => {
            let beta = bounds::vdc_beta(dd_ratio(*a)?).ok()?;
            Some(Q::from_integer(1) - beta)
        }
        _ => None,
    }
}

pub struct SweepArgs {
    pub weight: Weight,
    pub sign: Sign,
    pub refine: bool,
}

impl Default for SweepArgs {
    fn default() -> Self {
        Self {
            weight: Weight::Unit,
            sign: Sign::Plus,
            refine: true,
        }
    }
}

pub fn sweep(cfg: &ExperimentConfig, args: &SweepArgs) -> Result<Report, Failure> {
    let res = cfg.resolve()?;
    let template = BlockSpec::new(res.relation.clone(), 1, args.sign, args.weight)?;
    let scales: Vec<u64> = if cfg.scales.is_empty() { DEFAULT_SWEEP_SCALES.to_vec() } else { cfg.scales.clone() };
    let opts = SweepOptions {
        grid: cfg.grid,
        refine: args.refine,
        ..SweepOptions::default()
    };
    let rows: Result<Vec<_>, _> = scales
        .par_iter()
        .map(|&n| expsum::sweep_row(&template, &res.slice, n, &opts))
        .collect();
    let result = expsum::finish_sweep(rows?)?;

    let mut report = Report::new("sweep");
    let mut table = Table::new("sweep", &["n", "sup", "grid_sup", "l2", "l4", "grid", "refined"]);
    for r in &result.rows {
        table.push(vec![
            r.n.to_string(),
            num(r.sup_abs),
            num(r.grid_sup),
            num(r.l2),
            num(r.l4),
            r.grid.to_string(),
            r.refined.to_string(),
        ]);
    }
    report.tables.push(table);
    report.notes.extend(result.warnings.iter().cloned());
    let degenerate = matches!(&res.slice, SliceSpec::Horizontal { t } if t.is_zero());
    if degenerate {
        report.notes.push("degenerate control: t = 0, every block peaks at x = 0 with value N".into());
    }
    let predicted = match res.slice {
        SliceSpec::Horizontal { .. } => predicted_sup_exponent(&res.relation),
        _ => None,
    };
    report.summary = json!({
        "relation": cfg.relation,
        "slice": cfg.slice,
        "slope": result.fit.slope,
        "stderr": result.fit.stderr,
        "r_squared": result.fit.r_squared,
        "degenerate": degenerate,
        "predicted_sup_exponent": predicted.map(|p| bound_json(BoundValue::Exponent(p))),
    });
    push_range(&mut report, cfg, "slope", result.fit.slope, None, None);
    Ok(report)
}

fn sample_count(rel: &DispersionRelation, slice: &SliceSpec, modes: &[(i128, Complex64)], grid: Option<usize>) -> Result<usize, Failure> {
    if let Some(g) = grid {
        return Ok(g);
    }
    Ok(match slice {
        SliceSpec::Vertical { .. } => 1 << 14,
        _ => {
            let band = slice_terms(rel, slice, modes)?.band();
            (4 * band.max(1024)).next_power_of_two().min(MAX_SAMPLES as u128) as usize
        }
    })
}

/// Predicted graph dimension of the slice, when one is known.
pub fn predicted_dimension(rel: &DispersionRelation, slice: &SliceSpec) -> Option<BoundValue> {
    let d = rel.as_polynomial()?.degree() as u32;
    match slice {
        SliceSpec::Oblique { .. } => bounds::oblique_interval(d).ok(),
        SliceSpec::Horizontal { t } => {
            let rational = matches!(t, talbot_core::dispersion::HighPrecisionTime::Rational(_));
            match (rational, d) {
                (true, _) => Some(BoundValue::Exponent(Q::from_integer(1))),
                (false, 2) => Some(BoundValue::Exponent(Ratio::new(3, 2))),
                (false, _) => bounds::vinogradov_interval(d).ok(),
            }
        }
        SliceSpec::Vertical { .. } => None,
    }
}

pub fn dimension(cfg: &ExperimentConfig) -> Result<Report, Failure> {
    let res = cfg.resolve()?;
    let m = cfg.truncation.unwrap_or(1 << 12);
    let modes = truncated_modes(&res.datum, m);
    let len = sample_count(&res.relation, &res.slice, &modes, cfg.grid)?;
    let grid = evolve_slice(&res.relation, &res.datum, &cfg.datum, &res.slice, m, len)?;
    let (re, im) = (grid.real_part(), grid.imag_part());
    let (box_re, box_im, hol_re, hol_im) = match grid.band {
        Some(b) => (box_dimension_band(&re, b)?, box_dimension_band(&im, b)?, holder_exponent_band(&re, b)?, holder_exponent_band(&im, b)?),
        None => (box_dimension(&re)?, box_dimension(&im)?, holder_exponent(&re)?, holder_exponent(&im)?),
    };
    let besov = besov_profile(&grid.samples, &[2.0, f64::INFINITY])?;

    let mut report = Report::new("dimension");
    let mut boxes = Table::new("dimension_boxes", &["eps", "count_re", "variation_re", "count_im", "variation_im"]);
    for i in 0..box_re.eps_list.len() {
        boxes.push(vec![
            num(box_re.eps_list[i]),
            box_re.counts[i].to_string(),
            num(box_re.variation[i]),
            box_im.counts[i].to_string(),
            num(box_im.variation[i]),
        ]);
    }
    let mut blocks = Table::new("dimension_besov", &["n", "l2", "linf"]);
    for (j, s) in besov.scales.iter().enumerate() {
        blocks.push(vec![s.to_string(), num(besov.norms[0][j]), num(besov.norms[1][j])]);
    }
    report.tables.push(boxes);
    report.tables.push(blocks);
    let dim = box_re.dimension().max(box_im.dimension());
    let holder = hol_re.slope.min(hol_im.slope);
    report.summary = json!({
        "relation": cfg.relation,
        "datum": cfg.datum,
        "slice": cfg.slice,
        "truncation": m,
        "samples": len,
        "band": grid.band.map(|b| b.to_string()),
        "box_window": box_re.window,
        "box_dimension_re": box_re.dimension(),
        "box_dimension_im": box_im.dimension(),
        "box_dimension": dim,
        "holder_re": hol_re.slope,
        "holder_im": hol_im.slope,
        "besov_gamma_2": besov.gamma_for(2.0),
        "besov_gamma_inf": besov.gamma_for(f64::INFINITY),
        "predicted_dimension": predicted_dimension(&res.relation, &res.slice).map(bound_json),
    });
    push_range(&mut report, cfg, "dimension", dim, None, None);
    push_range(&mut report, cfg, "holder", holder, None, None);
    Ok(report)
}

pub fn quantize(cfg: &ExperimentConfig, a: i128, q: u64) -> Result<Report, Failure> {
    let res = cfg.resolve()?;
    let m = cfg.truncation.unwrap_or(1 << 12);
    let len = cfg.grid.unwrap_or(1 << 12);
    let quant = quantize_reconstruct(&res.relation, &res.datum, a, q)?;
    let check = quantize_verify(&res.relation, &res.datum, a, q, m, len)?;
    let mut report = Report::new("quantize");
    let mut table = Table::new("quantize_coefficients", &["m", "re", "im", "abs"]);
    for (i, c) in quant.coefficients.iter().enumerate() {
        table.push(vec![i.to_string(), num(c.re), num(c.im), num(c.norm())]);
    }
    let mut steps = Table::new("quantize_function", &["breakpoint_turns", "re", "im"]);
    for (b, v) in quant.function.breakpoints().iter().zip(quant.function.values()) {
        steps.push(vec![num(b.turns().to_f64()), num(v.re), num(v.im)]);
    }
    report.tables.push(table);
    report.tables.push(steps);
    report.summary = json!({
        "relation": cfg.relation,
        "datum": cfg.datum,
        "a": a,
        "q": q,
        "truncation": m,
        "samples": len,
        "deviation": check.deviation,
        "points_compared": check.points_compared,
        "unitarity_error": check.unitarity_error,
    });
    report.checks.push(Check::at_most("deviation", check.deviation, limit(cfg, "deviation_max", Some(2e-3)).unwrap()));
    report
        .checks
        .push(Check::at_most("unitarity_error", check.unitarity_error, limit(cfg, "unitarity_max", Some(1e-12)).unwrap()));
    Ok(report)
}

/// `(1/G) Σ_j |Σ_n e(h(n) j/G)|⁴`, the number of solutions of
/// `h₁ + h₃ ≡ h₂ + h₄ (mod G)`; with `G` above twice the spread of `h` this is
/// the exact count. `None` when that grid would exceed 2^22.
pub fn l4_quadrature(h: &IntPoly, k: u64) -> Option<f64> {
    let vals: Vec<i128> = (k..2 * k).map(|n| h.eval_checked(n as i128)).collect::<Option<_>>()?;
    let (lo, hi) = vals.iter().fold((i128::MAX, i128::MIN), |(a, b), &v| (a.min(v), b.max(v)));
    let g = (2 * (hi - lo) as u128 + 1).next_power_of_two().max(16);
    if g > 1 << 22 {
        return None;
    }
    let mut s = TrigSum::with_capacity(vals.len());
    for v in vals {
        s.push(Complex64::new(1.0, 0.0), v - lo);
    }
    let grid = s.eval_grid(g as usize);
    let fourth: Vec<f64> = grid.iter().map(|z| z.norm_sqr() * z.norm_sqr()).collect();
    Some(talbot_core::fit::pairwise_sum(&fourth) / g as f64)
}

pub fn l4count(cfg: &ExperimentConfig, k: i64, l: i64) -> Result<Report, Failure> {
    let res = cfg.resolve()?;
    let omega = res
        .relation
        .as_polynomial()
        .ok_or_else(|| Failure::Config("l4count needs a poly: relation".into()))?;
    let h = IntPoly::new(vec![0, l]).combine(1, omega, -k);
    let scales: Vec<u64> = if cfg.scales.is_empty() { DEFAULT_L4_SCALES.to_vec() } else { cfg.scales.clone() };
    let rows: Result<Vec<_>, Failure> = scales
        .par_iter()
        .map(|&kk| {
            let c = expsum::l4_quadruple_oracle(&h, kk)?;
            Ok((kk, c.count, l4_quadrature(&h, kk)))
        })
        .collect();
    let rows = rows?;
    let mut report = Report::new("l4count");
    let mut table = Table::new("l4count", &["k", "count", "quadrature"]);
    for (kk, c, quad) in &rows {
        table.push(vec![kk.to_string(), c.to_string(), quad.map(num).unwrap_or_default()]);
    }
    report.tables.push(table);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.0 as f64, r.1 as f64)).collect();
    let slope = log_log_fit(&pairs)?.slope;
    let worst = rows
        .iter()
        .filter_map(|(_, c, q)| q.map(|q| (q - *c as f64).abs() / *c as f64))
        .fold(0.0, f64::max);
    report.summary = json!({
        "relation": cfg.relation,
        "h": format!("{h}"),
        "slope": slope,
        "quadrature_relative_error": worst,
    });
    push_range(&mut report, cfg, "slope", slope, None, Some(2.25));
    report.checks.push(Check::at_most("quadrature_relative_error", worst, 1e-9));
    Ok(report)
}

pub struct FlowArgs {
    pub dt: f64,
    pub t: f64,
    pub lambdas: Vec<f64>,
    pub focusing: bool,
}

impl Default for FlowArgs {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            t: 0.5,
            lambdas: vec![0.05, 0.1, 0.2, 0.4],
            focusing: true,
        }
    }
}

/// Runs NLS (`equation` either NLS variant) or KdV and measures the smoothing
/// residual `u − e^{itL}g`.
pub fn flow(cfg: &ExperimentConfig, kdv: bool, args: &FlowArgs) -> Result<Report, Failure> {
    let res = cfg.resolve()?;
    let m = cfg.truncation.unwrap_or(1 << 10);
    let modes = truncated_modes(&res.datum, m);
    let equation = match (kdv, args.focusing) {
        (true, _) => Equation::Kdv,
        (false, true) => Equation::NlsFocusing,
        (false, false) => Equation::NlsDefocusing,
    };
    let solve = |modes: Vec<(i128, Complex64)>| match equation {
        Equation::Kdv => nonlinear::kdv_solve_with(modes, m, args.dt, &[args.t], KdvScheme::Resonant),
        _ => nonlinear::nls_wick_solve_modes(modes, args.focusing, m, args.dt, &[args.t]),
    };
    let traj = solve(modes.clone())?;
    let residual = nonlinear::smoothing_residual(&traj, 0)?;
    let hol_re = holder_exponent(&residual.real_part())?.slope;
    let holder = if kdv { hol_re } else { hol_re.min(holder_exponent(&residual.imag_part())?.slope) };
    let pairs: Result<Vec<(f64, f64)>, Failure> = args
        .lambdas
        .par_iter()
        .map(|&lam| {
            let scaled = modes.iter().map(|&(n, c)| (n, c * lam)).collect();
            let tr = solve(scaled)?;
            Ok((lam, nonlinear::residual_norm(&tr, 0)?))
        })
        .collect();
    let pairs = pairs?;
    let scaling = log_log_fit(&pairs)?.slope;

    let name = if kdv { "kdv" } else { "nls" };
    let mut report = Report::new(name);
    let mut table = Table::new(&format!("{name}_residual"), &["x", "re", "im"]);
    for (j, z) in residual.samples.iter().enumerate() {
        table.push(vec![num(residual.position(j)), num(z.re), num(z.im)]);
    }
    let mut sc = Table::new(&format!("{name}_scaling"), &["lambda", "residual_l2"]);
    for (l, r) in &pairs {
        sc.push(vec![num(*l), num(*r)]);
    }
    report.tables.push(table);
    report.tables.push(sc);
    report.notes.extend(traj.warnings.iter().cloned());
    let expected_power = if kdv { 2.0 } else { 3.0 };
    report.summary = json!({
        "equation": equation.name(),
        "datum": cfg.datum,
        "truncation": m,
        "grid": traj.grid,
        "dt": args.dt,
        "t": args.t,
        "wick_constant": traj.wick.0,
        "l2_drift": traj.max_l2_drift,
        "residual_holder": holder,
        "amplitude_slope": scaling,
        "expected_amplitude_power": expected_power,
    });
    let holder_min = if kdv { 0.28 } else { 0.40 };
    let drift_max = if kdv { 1e-6 } else { 1e-10 };
    push_range(&mut report, cfg, "holder", holder, Some(holder_min), None);
    push_range(&mut report, cfg, "drift", traj.max_l2_drift, None, Some(drift_max));
    push_range(&mut report, cfg, "amplitude_slope", scaling, Some(expected_power - 0.2), Some(expected_power + 0.2));
    Ok(report)
}

#[derive(Clone, Debug, Default)]
pub struct BoundArgs {
    pub d: Option<u32>,
    pub alpha: Option<String>,
    pub r: Option<u32>,
    pub k: Option<String>,
    pub l: Option<String>,
    pub r0: Option<String>,
    pub s: Option<String>,
    pub q: Option<String>,
}

fn ratio_arg(name: &str, v: &Option<String>) -> Result<Q, Failure> {
    let s = v.as_deref().ok_or_else(|| Failure::Config(format!("--{name} is required")))?;
    let parse = |t: &str| t.trim().parse::<i64>().ok();
    let r = match s.split_once('/') {
        Some((a, b)) => parse(a).zip(parse(b)).filter(|p| p.1 != 0).map(|(a, b)| Ratio::new(a, b)),
        None => s
            .parse::<f64>()
            .ok()
            .and_then(|x| dd_ratio(DoubleDouble::from_f64(x))),
    };
    r.ok_or_else(|| Failure::Config(format!("--{name} {s}: expected a/b or a short decimal")))
}

/// Names accepted by `bounds --theorem`.
pub const BOUND_KINDS: [&str; 10] = [
    "table", "oblique", "weyl", "vinogradov", "vdc", "frac-nls", "fractional-weyl", "pair", "strichartz", "t32",
];

pub fn bound(kind: &str, args: &BoundArgs) -> Result<Report, Failure> {
    let need_d = |min: u32| args.d.filter(|&d| d >= min).ok_or_else(|| Failure::Config(format!("--d >= {min} is required")));
    let mut report = Report::new("bounds");
    let mut table = Table::new("bounds", &["name", "value", "lower", "upper", "description"]);
    let mut rows: Vec<(String, BoundValue, String)> = Vec::new();
    let exp = |q: Q| BoundValue::Exponent(q);
    match kind {
        "table" => {
            for b in bounds::bound_table()? {
                rows.push((b.name, b.value, b.description));
            }
        }
        "oblique" => rows.push(("oblique_dimension".into(), bounds::oblique_interval(need_d(2)?)?, "oblique slice graph dimension".into())),
        "weyl" => rows.push(("weyl_saving".into(), exp(bounds::weyl_exponent(need_d(1)?)?), "Weyl saving 2^(1-d)".into())),
        "vinogradov" => rows.push(("space_dimension".into(), bounds::vinogradov_interval(need_d(2)?)?, "space-slice dimension".into())),
        "vdc" => rows.push(("vdc_beta".into(), exp(bounds::vdc_beta(ratio_arg("alpha", &args.alpha)?)?), "cancellation saving for |n|^alpha".into())),
        "frac-nls" => rows.push(("frac_nls_beta".into(), exp(bounds::frac_nls_beta(ratio_arg("alpha", &args.alpha)?)?), "fractional NLS smoothing".into())),
        "fractional-weyl" => rows.push((
            "fractional_sup".into(),
            exp(bounds::heath_brown_exponent(ratio_arg("alpha", &args.alpha)?, need_d(3)?)?),
            "sup exponent for |n|^alpha via its degree-d approximant".into(),
        )),
        "pair" => rows.push((
            "exponent_pair_sup".into(),
            exp(bounds::exponent_pair_bound(ratio_arg("k", &args.k)?, ratio_arg("l", &args.l)?, ratio_arg("alpha", &args.alpha)?)?),
            "k alpha + l - k".into(),
        )),
        "strichartz" => {
            let q = match args.q.as_deref() {
                Some("inf") => None,
                _ => Some(ratio_arg("q", &args.q)?),
            };
            rows.push((
                "strichartz_dimension".into(),
                exp(bounds::strichartz_lower(ratio_arg("r0", &args.r0)?, ratio_arg("s", &args.s)?, q)?),
                "dimension lower bound".into(),
            ))
        }
        "t32" => {
            let r = args.r.ok_or_else(|| Failure::Config("--r is required".into()))?;
            rows.push(("khinchin_levy_sup".into(), exp(bounds::t32_exponent(r)?), "sup exponent at Khinchin-Levy times".into()))
        }
        other => return Err(Failure::Config(format!("unknown bound `{other}`; one of {}", BOUND_KINDS.join(", ")))),
    }
    let mut listed = Vec::new();
    for (name, v, desc) in rows {
        table.push(vec![name.clone(), v.to_string(), num(ratio_f64(v.lower())), num(ratio_f64(v.upper())), desc]);
        listed.push(json!({ "name": name, "value": bound_json(v) }));
    }
    report.tables.push(table);
    report.summary = json!({ "bounds": listed });
    Ok(report)
}
