use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use talbot::acceptance;
use talbot::config::ExperimentConfig;
use talbot::experiments::{self, BoundArgs, FlowArgs, SweepArgs, BOUND_KINDS};
use talbot::report::Report;
use talbot::Failure;
use talbot_core::expsum::{Sign, Weight};

/// Exponential sums, fractal dimensions and nonlinear smoothing for
/// dispersive evolutions on the torus.
///
/// Every run writes its CSV tables, a JSON summary and manifest.json (the
/// resolved config, version, seed and a timestamp) into the output
/// directory. Exit status: 0 when every threshold holds, 1 when one fails
/// (artifacts are still written), 2 on a config error.
#[derive(Parser)]
#[command(name = "talbot", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// TOML experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Relation: poly:c_d,...,c_0 | frac:<alpha> | boussinesq | bo | gravity | gravcap.
    #[arg(long, global = true)]
    rel: Option<String>,
    /// Datum: step:<positions>[:<values>], e.g. step:0,pi or step:0,pi:0.5,-0.5.
    #[arg(long, global = true)]
    data: Option<String>,
    /// Slice: horiz:<theta> | vert:<x0>:<t0>,<t1> | obliq:<theta>:<k>/<l>; theta is
    /// rat:a/q | kl:sqrt2|phi|e | rand:<seed> | <decimal>, in units of 2 pi.
    #[arg(long, global = true)]
    slice: Option<String>,
    /// Comma-separated dyadic scales.
    #[arg(long, global = true, value_delimiter = ',')]
    scales: Option<Vec<u64>>,
    /// Sample count or FFT grid size.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Truncation M (modes |n| <= M).
    #[arg(long = "m", global = true)]
    truncation: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Threshold override, name=value (repeatable), e.g. slope_max=0.85.
    #[arg(long = "threshold", global = true)]
    thresholds: Vec<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightArg {
    Unit,
    Reciprocal,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Sup/L2/L4 norms of dyadic blocks over the scales, with the fitted sup exponent.
    ///
    /// sweep.csv columns: n, sup, grid_sup, l2, l4, grid, refined.
    Sweep {
        #[arg(long, value_enum, default_value = "unit")]
        weight: WeightArg,
        #[arg(long, value_enum, default_value = "plus")]
        sign: SignArg,
        /// Skip golden-section refinement of the grid peaks.
        #[arg(long)]
        no_refine: bool,
    },
    /// Box dimension, Hölder exponent and Besov profile of a slice.
    ///
    /// dimension_boxes.csv: eps, count_re, variation_re, count_im, variation_im.
    /// dimension_besov.csv: n, l2, linf (dyadic block norms).
    Dimension,
    /// Rational-time reconstruction as translates of the datum, checked against the series.
    ///
    /// quantize_coefficients.csv: m, re, im, abs. quantize_function.csv:
    /// breakpoint_turns, re, im.
    Quantize {
        #[arg(long, allow_hyphen_values = true)]
        a: i128,
        #[arg(long)]
        q: u64,
    },
    /// Solutions of h(n1)+h(n3) = h(n2)+h(n4) on [K, 2K) for h = l n - k omega(n).
    ///
    /// l4count.csv: k, count, quadrature.
    L4count {
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = 1)]
        l: i64,
    },
    /// Wick-ordered cubic NLS: smoothing residual and amplitude scaling.
    ///
    /// nls_residual.csv: x, re, im. nls_scaling.csv: lambda, residual_l2.
    Nls {
        #[command(flatten)]
        flow: FlowFlags,
        #[arg(long)]
        defocusing: bool,
    },
    /// KdV: smoothing residual and amplitude scaling (real, mean-zero data).
    ///
    /// kdv_residual.csv: x, re, im. kdv_scaling.csv: lambda, residual_l2.
    Kdv {
        #[command(flatten)]
        flow: FlowFlags,
    },
    /// Predicted exponents and dimension intervals, as exact fractions.
    ///
    /// bounds.csv: name, value, lower, upper, description.
    Bounds {
        /// table | oblique | weyl | vinogradov | vdc | frac-nls |
        /// fractional-weyl | pair | strichartz | t32.
        #[arg(long, alias = "bound", default_value = "table")]
        theorem: String,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long = "pair-k")]
        pair_k: Option<String>,
        #[arg(long = "pair-l")]
        pair_l: Option<String>,
        #[arg(long)]
        r0: Option<String>,
        #[arg(long)]
        s: Option<String>,
        /// Time exponent q, or inf.
        #[arg(long = "q-exp")]
        q_exp: Option<String>,
    },
    /// Runs the acceptance criteria and prints one line per criterion.
    Acceptance {
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
    },
}

#[derive(Args, Clone)]
struct FlowFlags {
    #[arg(long, default_value_t = 1e-4)]
    dt: f64,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Amplitudes for the scaling fit.
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.4")]
    lambdas: Vec<f64>,
}

fn resolve_config(c: &Common) -> Result<ExperimentConfig, Failure> {
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(v) = &c.rel {
        cfg.relation = v.clone();
    }
    if let Some(v) = &c.data {
        cfg.datum = v.clone();
    }
    if let Some(v) = &c.slice {
        cfg.slice = v.clone();
    }
    if let Some(v) = &c.scales {
        cfg.scales = v.clone();
    }
    cfg.grid = c.grid.or(cfg.grid);
    cfg.truncation = c.truncation.or(cfg.truncation);
    cfg.seed = c.seed.unwrap_or(cfg.seed);
    if let Some(v) = &c.out {
        cfg.output = v.clone();
    }
    for t in &c.thresholds {
        let (k, v) = t
            .split_once('=')
            .and_then(|(k, v)| Some((k.trim(), v.trim().parse::<f64>().ok()?)))
            .ok_or_else(|| Failure::Config(format!("threshold `{t}` must be name=value")))?;
        cfg.thresholds.insert(k.to_string(), v);
    }
    cfg.resolve()?;
    Ok(cfg)
}

fn flow_args(f: &FlowFlags, focusing: bool) -> FlowArgs {
    FlowArgs {
        dt: f.dt,
        t: f.t,
        lambdas: f.lambdas.clone(),
        focusing,
    }
}

fn run_acceptance(cfg: &ExperimentConfig, only: Option<Vec<u32>>) -> Result<bool, Failure> {
    let ids: Vec<u32> = only.unwrap_or_else(|| acceptance::CRITERIA.iter().map(|c| c.0).collect());
    let mut all = true;
    let mut records = Vec::new();
    for id in ids {
        let outcome = acceptance::run(id).ok_or_else(|| Failure::Config(format!("no criterion {id}")))?;
        println!("{}", outcome.line());
        all &= outcome.passed();
        records.push(json!({
            "id": outcome.id,
            "title": outcome.title,
            "passed": outcome.passed(),
            "error": outcome.error,
            "checks": outcome.checks,
            "seconds": outcome.seconds,
        }));
    }
    std::fs::create_dir_all(&cfg.output)?;
    let body = serde_json::to_string_pretty(&json!({ "passed": all, "criteria": records })).expect("json");
    std::fs::write(cfg.output.join("acceptance.json"), body + "\n")?;
    Ok(all)
}

fn execute(cli: Cli) -> Result<bool, Failure> {
    let cfg = resolve_config(&cli.common)?;
    let report: Report = match cli.command {
        Command::Sweep { weight, sign, no_refine } => {
            let args = SweepArgs {
                weight: match weight {
                    WeightArg::Unit => Weight::Unit,
                    WeightArg::Reciprocal => Weight::Reciprocal,
                },
                sign: match sign {
                    SignArg::Plus => Sign::Plus,
                    SignArg::Minus => Sign::Minus,
                },
                refine: !no_refine,
            };
            experiments::sweep(&cfg, &args)?
        }
        Command::Dimension => experiments::dimension(&cfg)?,
        Command::Quantize { a, q } => experiments::quantize(&cfg, a, q)?,
        Command::L4count { k, l } => experiments::l4count(&cfg, k, l)?,
        Command::Nls { flow, defocusing } => experiments::flow(&cfg, false, &flow_args(&flow, !defocusing))?,
        Command::Kdv { flow } => experiments::flow(&cfg, true, &flow_args(&flow, true))?,
        Command::Bounds {
            theorem,
            d,
            alpha,
            r,
            pair_k,
            pair_l,
            r0,
            s,
            q_exp,
        } => {
            if !BOUND_KINDS.contains(&theorem.as_str()) {
                return Err(Failure::Config(format!("unknown bound `{theorem}`")));
            }
            let args = BoundArgs {
                d,
                alpha,
                r,
                k: pair_k,
                l: pair_l,
                r0,
                s,
                q: q_exp,
            };
            let report = experiments::bound(&theorem, &args)?;
            for row in &report.tables[0].rows {
                println!("{} {}", row[0], row[1]);
            }
            report
        }
        Command::Acceptance { only } => return run_acceptance(&cfg, only),
    };
    report.write(&cfg, &cfg.output)?;
    if report.subcommand != "bounds" {
        println!("{}", serde_json::to_string_pretty(&report.summary).expect("json"));
    }
    for note in &report.notes {
        println!("note: {note}");
    }
    for c in &report.checks {
        println!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.describe());
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    talbot::init_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("talbot: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
