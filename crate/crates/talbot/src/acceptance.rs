//! The acceptance suite: eleven criteria, each a list of [`Check`]s at fixed
//! tolerances.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use talbot_core::bounds::{self, BoundValue, Q};
use talbot_core::dd::DoubleDouble;
use talbot_core::diophantine::solve_time_for_ctr;
use talbot_core::dispersion::{DispersionRelation, HighPrecisionTime};
use talbot_core::evolution::{evolve_slice, quantize_verify, SliceSpec};
use talbot_core::expsum::{self, BlockSpec, SweepOptions, SweepResult};
use talbot_core::fit::log_log_fit;
use talbot_core::fractal::{besov_profile, box_dimension_band, holder_exponent_band, weierstrass};
use talbot_core::initial_data::StepFunction;
use talbot_core::poly::IntPoly;
use talbot_core::Turns;

use crate::config::ExperimentConfig;
use crate::experiments::{self, l4_quadrature, FlowArgs};
use crate::grammar::random_theta;
use crate::report::Check;
use crate::Failure;

pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// One line: verdict, title, first failing check (or all checks), time.
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let body = match &self.error {
            Some(e) => format!("error: {e}"),
            None => {
                let failing: Vec<String> = self.checks.iter().filter(|c| !c.passed).map(Check::describe).collect();
                if failing.is_empty() {
                    format!("{} checks", self.checks.len())
                } else {
                    failing.join("; ")
                }
            }
        };
        format!("[{verdict}] {:>2} {}: {body} ({:.1} s)", self.id, self.title, self.seconds)
    }
}

type Criterion = fn() -> Result<Vec<Check>, Failure>;

pub const CRITERIA: [(u32, &str, Criterion); 11] = [
    (1, "quantization exactness", quantization),
    (2, "space-slice dimension", space_dimension),
    (3, "oblique sup exponent", oblique_sup),
    (4, "oblique dimension", oblique_dimension),
    (5, "cubic L4 bound", cubic_l4),
    (6, "L4 quadruple counts", quadruple_counts),
    (7, "fractional-power sup exponents", fractional_sup),
    (8, "Khinchin-Levy time sup exponent", khinchin_levy_sup),
    (9, "estimator calibration", calibration),
    (10, "nonlinear smoothing", nonlinear_smoothing),
    (11, "bound tables", bound_tables),
];

pub fn run(id: u32) -> Option<Outcome> {
    let &(id, title, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (checks, error) = match f() {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    Some(Outcome {
        id,
        title,
        checks,
        error,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn schrodinger() -> DispersionRelation {
    DispersionRelation::monomial(-1, 2)
}

fn runtime(start: Instant, max_seconds: f64) -> Check {
    Check::at_most("runtime_s", start.elapsed().as_secs_f64(), max_seconds)
}

fn dyadic(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

fn sweep(relation: DispersionRelation, slice: &SliceSpec, scales: &[u64]) -> Result<SweepResult, Failure> {
    let template = BlockSpec::unit(relation, 1)?;
    let rows: Result<Vec<_>, _> = scales
        .par_iter()
        .map(|&n| expsum::sweep_row(&template, slice, n, &SweepOptions::default()))
        .collect();
    Ok(expsum::finish_sweep(rows?)?)
}

fn fractional(num: i128, den: i128) -> Result<DispersionRelation, Failure> {
    Ok(DispersionRelation::fractional(DoubleDouble::from_ratio(num, den))?)
}

fn quantization() -> Result<Vec<Check>, Failure> {
    let start = Instant::now();
    let g = StepFunction::half_indicator();
    let cases = [(1, 1), (1, 2), (1, 4), (1, 3), (2, 3)];
    let results: Result<Vec<_>, _> = cases
        .par_iter()
        .map(|&(a, q)| quantize_verify(&schrodinger(), &g, a, q, 1 << 12, 1 << 12))
        .collect();
    let mut checks = Vec::new();
    for ((a, q), r) in cases.iter().zip(results?) {
        checks.push(Check::at_most(&format!("unitarity_error[{a}/{q}]"), r.unitarity_error, 1e-12));
        checks.push(Check::at_most(&format!("deviation[{a}/{q}]"), r.deviation, 2e-3));
    }
    checks.push(runtime(start, 10.0));
    Ok(checks)
}

fn space_dimension() -> Result<Vec<Check>, Failure> {
    let g = StepFunction::half_indicator();
    let cases = [
        ("sqrt2", HighPrecisionTime::from_theta(DoubleDouble::SQRT2), 1.40, 1.60),
        ("phi", HighPrecisionTime::from_theta(DoubleDouble::PHI), 1.40, 1.60),
        ("1/3", HighPrecisionTime::rational(1, 3)?, 0.95, 1.10),
    ];
    let mut checks = Vec::new();
    for (name, t, lo, hi) in cases {
        let s = evolve_slice(&schrodinger(), &g, "step:0,pi", &SliceSpec::Horizontal { t }, 1 << 16, 1 << 18)?;
        let band = s.band.expect("horizontal slices are band limited");
        for (part, v) in [("re", s.real_part()), ("im", s.imag_part())] {
            let d = box_dimension_band(&v, band)?.dimension();
            checks.push(Check::within(&format!("dimension_{part}[{name}]"), d, Some(lo), Some(hi)));
        }
    }
    Ok(checks)
}

fn oblique_sup() -> Result<Vec<Check>, Failure> {
    let scales = dyadic(8, 16);
    let mut cs: Vec<(String, HighPrecisionTime)> = (1..=10u64).map(|s| (format!("seed {s}"), random_theta(s))).collect();
    cs.push(("sqrt2".into(), HighPrecisionTime::from_theta(DoubleDouble::SQRT2)));
    let mut checks = Vec::new();
    for (name, c) in cs {
        let slice = SliceSpec::oblique(c, 1, 1)?;
        let r = sweep(schrodinger(), &slice, &scales)?;
        checks.push(Check::within(&format!("sup_slope[{name}]"), r.fit.slope, Some(0.48), Some(0.85)));
    }
    Ok(checks)
}

fn oblique_dimension() -> Result<Vec<Check>, Failure> {
    let g = StepFunction::half_indicator();
    let mut checks = Vec::new();
    for (name, th) in [("sqrt2", DoubleDouble::SQRT2), ("phi", DoubleDouble::PHI), ("e", DoubleDouble::E)] {
        let slice = SliceSpec::oblique(HighPrecisionTime::from_theta(th), 1, 1)?;
        let s = evolve_slice(&schrodinger(), &g, "step:0,pi", &slice, 1 << 11, 1 << 24)?;
        let band = s.band.expect("oblique slices are band limited");
        let d = box_dimension_band(&s.real_part(), band)?
            .dimension()
            .max(box_dimension_band(&s.imag_part(), band)?.dimension());
        checks.push(Check::within(&format!("dimension[{name}]"), d, Some(1.70), Some(1.95)));
        let prof = besov_profile(&s.samples, &[2.0])?;
        let slope = prof.gamma[0].as_ref().map_or(f64::NAN, |f| f.slope);
        checks.push(Check::within(&format!("block_l2_slope[{name}]"), slope, Some(-0.28), Some(-0.22)));
    }
    Ok(checks)
}

fn cubic_l4() -> Result<Vec<Check>, Failure> {
    let t = HighPrecisionTime::from_theta(DoubleDouble::SQRT2);
    let airy = DispersionRelation::monomial(1, 3);
    let scales = dyadic(6, 13);
    let norms: Result<Vec<(f64, f64)>, Failure> = scales
        .par_iter()
        .map(|&n| {
            let spec = BlockSpec::unit(airy.clone(), n)?;
            Ok((n as f64, expsum::lp_norm(&spec, &t, 4.0, expsum::default_grid(n))?))
        })
        .collect();
    let slope = log_log_fit(&norms?)?.slope;
    let mut checks = vec![Check::at_most("l4_slope", slope, 0.55)];
    for n in [32u64, 64] {
        let c = expsum::airy_l4_identity_check(&t, n, 1 << 12)?;
        checks.push(Check::at_most(&format!("identity_relative_error[{n}]"), c.relative_error, 1e-8));
    }
    Ok(checks)
}

fn quadruple_counts() -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    for (k, l, d) in [(1i64, 1i64, 2usize), (1, 3, 3)] {
        let h = IntPoly::new(vec![0, l]).combine(1, &IntPoly::monomial(1, d), -k);
        let mut pairs = Vec::new();
        for big_k in [16u64, 32, 64] {
            let count = expsum::l4_quadruple_oracle(&h, big_k)?.count;
            let naive = expsum::l4_quadruple_count_naive(&h, big_k)?;
            checks.push(Check::at_most(&format!("oracle_vs_brute[{k},{l},{d};{big_k}]"), count.abs_diff(naive) as f64, 0.0));
            if let Some(q) = l4_quadrature(&h, big_k) {
                checks.push(Check::at_most(
                    &format!("oracle_vs_quadrature[{k},{l},{d};{big_k}]"),
                    (q - count as f64).abs() / count as f64,
                    1e-9,
                ));
            }
            pairs.push((big_k as f64, count as f64));
        }
        checks.push(Check::at_most(&format!("count_slope[{k},{l},{d}]"), log_log_fit(&pairs)?.slope, 2.25));
    }
    Ok(checks)
}

fn fractional_sup() -> Result<Vec<Check>, Failure> {
    let t = HighPrecisionTime::from_t(DoubleDouble::ONE);
    let slice = SliceSpec::Horizontal { t };
    let scales = dyadic(14, 19);
    let mut checks = Vec::new();
    let mut slopes = Vec::new();
    for (num, den) in [(1, 2), (3, 2), (9, 5)] {
        let beta = bounds::vdc_beta(Ratio::new(num as i64, den as i64))?;
        let limit = 1.0 - bounds::ratio_f64(beta) + 0.05;
        let slope = sweep(fractional(num, den)?, &slice, &scales)?.fit.slope;
        checks.push(Check::at_most(&format!("sup_slope[alpha={num}/{den}]"), slope, limit));
        slopes.push(slope);
    }
    for (rel, model, name) in [
        (DispersionRelation::Gravity, slopes[0], "gravity"),
        (DispersionRelation::GravityCapillary, slopes[1], "gravity_capillary"),
    ] {
        let slope = sweep(rel, &slice, &scales)?.fit.slope;
        checks.push(Check::at_most(&format!("model_gap[{name}]"), (slope - model).abs(), 0.05));
    }
    Ok(checks)
}

fn khinchin_levy_sup() -> Result<Vec<Check>, Failure> {
    let theta = solve_time_for_ctr(DoubleDouble::SQRT2, 3)?;
    let slice = SliceSpec::Horizontal {
        t: HighPrecisionTime::from_theta(theta),
    };
    let slope = sweep(fractional(3, 2)?, &slice, &dyadic(8, 16))?.fit.slope;
    let mut checks = vec![Check::at_most("sup_slope", slope, 0.675)];
    for k in 10..=14 {
        let c = expsum::bprocess_dual_compare(3, theta, Turns::ZERO, 1 << k)?;
        checks.push(Check::at_most(&format!("dual_discrepancy[2^{k}]"), c.discrepancy, c.budget));
    }
    Ok(checks)
}

fn calibration() -> Result<Vec<Check>, Failure> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for gamma in [0.3, 0.5, 0.7] {
        let w = weierstrass(gamma, 20, 1 << 20);
        let band = 1u128 << 19;
        let d = box_dimension_band(&w, band)?.dimension();
        let h = holder_exponent_band(&w, band)?.slope;
        let c: Vec<Complex64> = w.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let b = besov_profile(&c, &[f64::INFINITY])?.gamma_for(f64::INFINITY).unwrap_or(f64::NAN);
        checks.push(Check::within(&format!("box[{gamma}]"), d, Some(2.0 - gamma - 0.05), Some(2.0 - gamma + 0.05)));
        checks.push(Check::within(&format!("holder[{gamma}]"), h, Some(gamma - 0.05), Some(gamma + 0.05)));
        checks.push(Check::within(&format!("besov_inf[{gamma}]"), b, Some(gamma - 0.02), Some(gamma + 0.02)));
    }
    checks.push(runtime(start, 60.0));
    Ok(checks)
}

fn nonlinear_smoothing() -> Result<Vec<Check>, Failure> {
    let nls = ExperimentConfig {
        datum: "step:0,pi".into(),
        truncation: Some(1 << 10),
        ..ExperimentConfig::default()
    };
    let kdv = ExperimentConfig {
        datum: "step:0,pi:0.5,-0.5".into(),
        ..nls.clone()
    };
    let args = FlowArgs::default();
    let mut checks = Vec::new();
    for (name, r) in [("nls", experiments::flow(&nls, false, &args)?), ("kdv", experiments::flow(&kdv, true, &args)?)] {
        checks.extend(r.checks.into_iter().map(|mut c| {
            c.name = format!("{name}_{}", c.name);
            c
        }));
    }
    Ok(checks)
}

fn exact(name: &str, got: BoundValue, want: BoundValue) -> Check {
    let mut c = Check::at_most(name, if got == want { 0.0 } else { 1.0 }, 0.0);
    if got != want {
        c.name = format!("{name} (got {got}, want {want})");
    }
    c
}

fn bound_tables() -> Result<Vec<Check>, Failure> {
    let start = Instant::now();
    let q = |a: i64, b: i64| -> Q { Ratio::new(a, b) };
    let zero = Q::from_integer(0);
    let four = Some(Q::from_integer(4));
    let three_halves_gain = (Q::from_integer(2) - q(3, 2)) / 8;
    let table = bounds::bound_table()?;
    let entry = |name: &str| table.iter().find(|b| b.name == name).map(|b| b.value);
    let mut checks = vec![
        exact("oblique_quadratic", bounds::oblique_interval(2)?, BoundValue::Interval(q(7, 4), q(19, 10))),
        exact("oblique_cubic", bounds::oblique_interval(3)?, BoundValue::Interval(q(11, 6), q(53, 27))),
        exact("khinchin_levy_sup", BoundValue::Exponent(bounds::t32_exponent(3)?), BoundValue::Exponent(q(5, 8))),
        exact(
            "strichartz_step",
            BoundValue::Exponent(bounds::strichartz_lower(q(1, 2), zero, four)?),
            BoundValue::Exponent(q(3, 2)),
        ),
        exact(
            "strichartz_three_halves",
            BoundValue::Exponent(bounds::strichartz_lower(q(1, 2), three_halves_gain, four)?),
            BoundValue::Exponent(q(11, 8)),
        ),
    ];
    match entry("fractional_dimension_three_halves") {
        Some(v) => checks.push(exact("fractional_dimension_three_halves", v, BoundValue::Interval(q(11, 8), q(13, 8)))),
        None => checks.push(Check::at_most("fractional_dimension_three_halves missing", 1.0, 0.0)),
    }
    checks.push(runtime(start, 1.0));
    Ok(checks)
}
