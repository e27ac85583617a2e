//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code: 0 success, 1 a check
//! failed, 2 usage or configuration error.

mod config;
mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    empty_cap_integral, empty_cap_integral_bound, facet_volume_cap_bound, fit_scaling, hausdorff_tail_bound, max_facet_expectation_bound,
    max_facet_tail_bound, min_facet_existence_bound, min_facet_interval, FitModel, ScalingFit, ScalingPoint,
};
use crate::caps::{cap_angle_from_fraction, cap_area, cap_area_bounds};
use crate::error::Error;
use crate::extremal::{aggregate, run_trials};
use crate::lab;
use crate::report::BoundReport;
use crate::rng::RngStream;
use crate::simplex_law::cdf_bounds;
use crate::special::sphere_area;

use config::{pick, pick_list, ConfigFile};
pub use output::{parse_aggregate_csv, AggregateRow, CSV_HEADER};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::InvalidInput(_) | Error::Unsupported(_) => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sphere-facets", version, about = "Extremal facets of random polytopes inscribed in the unit sphere")]
struct Cli {
    /// Flat `key = value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (output does not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run hull trials and write per-(n, N) aggregates.
    Simulate(GridArgs),
    /// Fit scaling laws to aggregate CSV files.
    Fit(FitArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate bound evaluators on a grid.
    Bounds(BoundsArgs),
    /// Cap calculator.
    Caps(CapsArgs),
}

#[derive(Args, Debug, Default)]
struct GridArgs {
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    #[arg(long = "N", value_delimiter = ',')]
    big_n: Option<Vec<u64>>,
    #[arg(long)]
    trials: Option<u64>,
    /// Monte-Carlo samples for sampling-based checks.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Aggregate CSV files written by `simulate`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    /// Restrict to one statistic.
    #[arg(long)]
    stat: Option<String>,
    /// Also write plot data (n, stat, N, mean, stderr, model) as CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Evaluator name, or `all`.
    #[arg(long)]
    bound: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    /// Parameter grid (`t` or `Δ` depending on the bound).
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "cap")]
struct CapSpec {
    /// Plane offset from the origin.
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Polar angle in radians.
    #[arg(long)]
    angle: Option<f64>,
    /// `R` such that the cap has area `|S^{n−1}|/R`.
    #[arg(long)]
    fraction: Option<f64>,
}

#[derive(Args, Debug)]
struct CapsArgs {
    #[arg(long)]
    n: Option<u32>,
    #[command(flatten)]
    spec: CapSpec,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Auto,
    Power,
    LogOverN,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Suite {
    Caps,
    Simplex,
    Bp,
    Tails,
    /// Empty-cap integral inequality (token kept for interface stability).
    #[value(name = "lemma17")]
    #[serde(rename = "lemma17")]
    EmptyCap,
    Events,
}

/// Entry point for the binary; `args` includes the program name.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("check failed: {m}"),
            }
            e.code()
        }
    }
}

struct Common {
    cfg: ConfigFile,
    seed: u64,
    out: Option<PathBuf>,
    format: Format,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads = pick(cli.threads, &cfg, "threads", 0usize)?;
    let out = match cli.out {
        Some(p) => Some(p),
        None => cfg.get::<PathBuf>("out")?,
    };
    let format = match cli.format {
        Some(f) => f,
        None => match cfg.get::<String>("format")?.as_deref() {
            None => Format::Csv,
            Some(s) => Format::from_str(s, true).map_err(|_| CliError::Usage(format!("config: bad format '{s}'")))?,
        },
    };
    let common = Common { seed: pick(cli.seed, &cfg, "seed", 0)?, cfg, out, format };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Simulate(g) => simulate(&common, g),
        Command::Fit(f) => fit(&common, f),
        Command::Verify(v) => verify(&common, v),
        Command::Bounds(b) => bounds(&common, b),
        Command::Caps(c) => caps(&common, c),
    })
}

fn emit(common: &Common, bytes: &[u8]) -> Result<(), CliError> {
    match &common.out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Usage(format!("stdout: {e}"))),
    }
}

/// Label for the stream of one `(n, N)` cell.
pub fn cell_label(n: u32, big_n: u64) -> u64 {
    ((n as u64) << 40) ^ big_n
}

fn simulate(common: &Common, g: GridArgs) -> Result<(), CliError> {
    let cfg = &common.cfg;
    let dims = pick_list(g.n, cfg, "n", &[2])?;
    let sizes = pick_list(g.big_n, cfg, "N", &[100])?;
    let trials = pick(g.trials, cfg, "trials", 1000u64)?;
    if trials == 0 {
        return Err(CliError::Usage("trials must be >= 1".into()));
    }
    let mut settings = BTreeMap::new();
    settings.insert("command", "simulate".to_string());
    settings.insert("n", join(&dims));
    settings.insert("N", join(&sizes));
    settings.insert("trials", trials.to_string());
    settings.insert("seed", common.seed.to_string());
    let meta = output::Meta::new("simulate", common.seed, &settings);

    let root = RngStream::new(common.seed, 0);
    let mut cells = Vec::new();
    for &n in &dims {
        for &m in &sizes {
            cells.push(aggregate(&root.derive(cell_label(n, m)), n, m, trials)?);
        }
    }
    let bytes = match common.format {
        Format::Csv => output::aggregates_csv(&meta, &cells),
        Format::Json => output::json(&serde_json::json!({ "meta": meta, "cells": cells }))?,
    };
    emit(common, &bytes)
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Accepted exponent window for a power-law fit, where one is known.
pub fn exponent_window(stat: &str, n: u32) -> Option<(f64, f64)> {
    match (stat, n) {
        ("min_facet" | "min_arc_gap", 2) => Some((-2.15, -1.85)),
        ("min_facet", 3) => Some((-1.75, -1.45)),
        ("min_facet", 4..) => Some((-1.65, -1.35)),
        _ => None,
    }
}

/// Largest accepted `max/min` spread of `mean · N / log N`.
pub const RATIO_SPREAD_LIMIT: f64 = 2.0;

#[derive(Serialize)]
struct FitEntry {
    #[serde(flatten)]
    fit: ScalingFit,
    window: Option<(f64, f64)>,
    ratio_spread: Option<f64>,
    pass: Option<bool>,
}

fn default_model(stat: &str) -> FitModel {
    if stat.starts_with("max_facet") || stat == "max_arc_gap" {
        FitModel::LogOverN
    } else {
        FitModel::Power
    }
}

fn model_value(fit: &ScalingFit, big_n: f64) -> f64 {
    match (fit.model, fit.exponent) {
        (FitModel::Power, Some(a)) => fit.constant * big_n.powf(a),
        _ => fit.constant * big_n.ln() / big_n,
    }
}

fn fit(common: &Common, f: FitArgs) -> Result<(), CliError> {
    let model = match f.model {
        Some(m) => m,
        None => match common.cfg.get::<String>("model")?.as_deref() {
            None => ModelArg::Auto,
            Some(s) => ModelArg::from_str(s, true).map_err(|_| CliError::Usage(format!("config: bad model '{s}'")))?,
        },
    };
    let stat_filter = match f.stat {
        Some(s) => Some(s),
        None => common.cfg.get::<String>("stat")?,
    };
    let mut groups: BTreeMap<(u32, String), Vec<ScalingPoint>> = BTreeMap::new();
    let mut seeds = Vec::new();
    for path in &f.inputs {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let (seed, rows) = parse_aggregate_csv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        seeds.extend(seed);
        for r in rows {
            if stat_filter.as_ref().is_some_and(|s| *s != r.stat) {
                continue;
            }
            groups.entry((r.n, r.stat)).or_default().push(ScalingPoint {
                big_n: r.big_n as f64,
                mean: r.mean,
                stderr: r.stderr.unwrap_or(0.0),
            });
        }
    }
    if groups.is_empty() {
        return Err(CliError::Usage("no rows to fit".into()));
    }
    let mut entries = Vec::new();
    let mut plot = String::from("n,stat,N,mean,stderr,model\n");
    for ((n, stat), mut pts) in groups {
        pts.sort_by(|a, b| a.big_n.total_cmp(&b.big_n));
        let m = match model {
            ModelArg::Auto => default_model(&stat),
            ModelArg::Power => FitModel::Power,
            ModelArg::LogOverN => FitModel::LogOverN,
        };
        let fit = fit_scaling(&stat, n, &pts, m).map_err(|e| CliError::Usage(format!("{stat} n={n}: {e}")))?;
        for p in &pts {
            plot.push_str(&format!("{n},{stat},{},{},{},{}\n", p.big_n, p.mean, p.stderr, model_value(&fit, p.big_n)));
        }
        let (window, ratio_spread, pass) = match m {
            FitModel::Power => {
                let w = exponent_window(&stat, n);
                let pass = w.zip(fit.exponent).map(|((lo, hi), a)| (lo..=hi).contains(&a));
                (w, None, pass)
            }
            FitModel::LogOverN => {
                let s = fit.ratio_spread();
                (None, Some(s), Some(s < RATIO_SPREAD_LIMIT))
            }
        };
        entries.push(FitEntry { fit, window, ratio_spread, pass });
    }
    if let Some(p) = f.plot.or(common.cfg.get("plot")?) {
        std::fs::write(&p, plot).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let failed: Vec<String> = entries
        .iter()
        .filter(|e| e.pass == Some(false))
        .map(|e| format!("{} n={}", e.fit.statistic, e.fit.n))
        .collect();
    let doc = serde_json::json!({
        "version": env!("CARGO_PKG_VERSION"),
        "input_seeds": seeds,
        "passed": failed.is_empty(),
        "fits": entries,
    });
    emit(common, &output::json(&doc)?)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("outside expected window: {}", failed.join(", "))))
    }
}

fn verify(common: &Common, v: VerifyArgs) -> Result<(), CliError> {
    let cfg = &common.cfg;
    let g = v.grid;
    let root = RngStream::new(common.seed, 0);
    let samples = |default: u64| pick(g.samples, cfg, "samples", default);
    let reports: Vec<BoundReport> = match v.suite {
        Suite::Caps => {
            let mut c = lab::CapsConfig { samples: samples(1_000_000)?, ..Default::default() };
            if let Some(d) = g.n.clone().map(Some).unwrap_or(cfg.list("n")?) {
                c.dims = d;
            }
            lab::caps_suite(&root, &c)?
        }
        Suite::Simplex => lab::simplex_suite(&root, &lab::SimplexConfig { samples: samples(1_000_000)? })?,
        Suite::Bp => {
            let mut out = Vec::new();
            for n in pick_list(g.n, cfg, "n", &[3])? {
                out.extend(lab::bp_suite(&root.derive(n as u64), n, samples(10_000_000)?)?);
            }
            out
        }
        Suite::Tails => {
            let trials = pick(g.trials, cfg, "trials", 10_000u64)?;
            let mut out = Vec::new();
            for n in pick_list(g.n, cfg, "n", &[2, 3])? {
                for m in pick_list(g.big_n.clone(), cfg, "N", &[50, 200])? {
                    let t = run_trials(&root.derive(cell_label(n, m)), n, m, trials)?;
                    out.extend(lab::max_facet_tail_reports(&t, n, m)?);
                    out.extend(lab::hausdorff_tail_reports(&t, n, m)?);
                    if m >= 3 {
                        out.push(lab::max_facet_expectation_report(&t, n, m)?);
                    }
                    if n >= 3 {
                        out.extend(lab::existence_reports(&t, n, m)?);
                    }
                    out.push(lab::cap_bound_report(&t, n, m));
                }
            }
            out
        }
        Suite::EmptyCap => lab::integral_suite(&pick_list(g.n, cfg, "n", &[4, 5])?, &pick_list(g.big_n, cfg, "N", &[10_000, 100_000])?)?,
        Suite::Events => lab::events_suite(&root, &lab::EventsConfig { samples: samples(1_000_000)?, ..Default::default() })?,
    };
    for r in &reports {
        eprintln!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.satisfied()).count();
    let bytes = match common.format {
        Format::Csv => output::reports_csv(common.seed, &reports),
        Format::Json => output::json(&serde_json::json!({
            "suite": v.suite,
            "seed": common.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "passed": failed == 0,
            "reports": reports,
        }))?,
    };
    emit(common, &bytes)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} of {} checks failed", reports.len())))
    }
}

#[derive(Serialize)]
struct BoundRow {
    bound: &'static str,
    n: u32,
    #[serde(rename = "N")]
    big_n: Option<u64>,
    param: Option<f64>,
    raw: f64,
    value: f64,
}

pub const BOUND_NAMES: &[&str] = &[
    "hausdorff_tail",
    "max_facet_tail",
    "max_facet_expectation",
    "min_facet_interval_lower",
    "min_facet_interval_upper",
    "min_facet_existence",
    "simplex_cdf_lower",
    "simplex_cdf_upper",
    "empty_cap_integral",
    "empty_cap_integral_bound",
    "facet_volume_cap",
];

fn eval_bound(name: &'static str, n: u32, m: u64, t: f64) -> crate::Result<Vec<BoundRow>> {
    let row = |big_n: Option<u64>, param: Option<f64>, raw: f64, value: f64| BoundRow { bound: name, n, big_n, param, raw, value };
    let same = |v: f64| (v, v);
    Ok(match name {
        "hausdorff_tail" => {
            let c = hausdorff_tail_bound(n, m, t)?;
            vec![row(Some(m), Some(t), c.raw, c.value)]
        }
        "max_facet_tail" => {
            let c = max_facet_tail_bound(n, m, t)?;
            vec![row(Some(m), Some(t), c.raw, c.value)]
        }
        "min_facet_existence" => {
            let c = min_facet_existence_bound(n, m, t)?;
            vec![row(Some(m), Some(t), c.raw, c.value)]
        }
        "max_facet_expectation" => {
            let (r, v) = same(max_facet_expectation_bound(n, m as f64)?);
            vec![row(Some(m), None, r, v)]
        }
        "min_facet_interval_lower" | "min_facet_interval_upper" => match min_facet_interval(n, m as f64)? {
            Some((lo, hi)) => {
                let (r, v) = same(if name.ends_with("lower") { lo } else { hi });
                vec![row(Some(m), None, r, v)]
            }
            None => return Err(Error::Unsupported(format!("{name} is explicit only for n = 2"))),
        },
        "simplex_cdf_lower" => match cdf_bounds(n, t)?.lower {
            Some(v) => vec![row(None, Some(t), v, v.min(1.0))],
            None => return Err(Error::Unsupported(format!("{name} undefined at t = {t}"))),
        },
        "simplex_cdf_upper" => {
            let b = cdf_bounds(n, t)?;
            vec![row(None, Some(t), b.upper_raw, b.upper)]
        }
        "empty_cap_integral" => {
            let (r, v) = same(empty_cap_integral(n, m)?);
            vec![row(Some(m), None, r, v)]
        }
        "empty_cap_integral_bound" => {
            let (r, v) = same(empty_cap_integral_bound(n, m)?);
            vec![row(Some(m), None, r, v)]
        }
        "facet_volume_cap" => {
            let (r, v) = same(facet_volume_cap_bound(n, t));
            vec![row(None, Some(t), r, v)]
        }
        _ => unreachable!(),
    })
}

fn bounds(common: &Common, b: BoundsArgs) -> Result<(), CliError> {
    let cfg = &common.cfg;
    let which = match b.bound {
        Some(s) => s,
        None => cfg.get::<String>("bound")?.unwrap_or_else(|| "all".into()),
    };
    let names: Vec<&'static str> = if which == "all" {
        BOUND_NAMES.to_vec()
    } else {
        vec![*BOUND_NAMES
            .iter()
            .find(|&&x| x == which)
            .ok_or_else(|| CliError::Usage(format!("unknown bound '{which}'; expected one of {}", BOUND_NAMES.join(", "))))?]
    };
    let dims = pick_list(b.grid.n, cfg, "n", &[2, 3])?;
    let sizes = pick_list(b.grid.big_n, cfg, "N", &[100, 1000])?;
    let ts = pick_list(b.t, cfg, "t", &[0.001, 0.01, 0.1])?;
    let mut rows = Vec::new();
    for name in &names {
        let uses_n = !name.starts_with("simplex_cdf") && *name != "facet_volume_cap";
        let uses_t = matches!(*name, "hausdorff_tail" | "max_facet_tail" | "min_facet_existence" | "facet_volume_cap")
            || name.starts_with("simplex_cdf");
        for &n in &dims {
            for &m in if uses_n { &sizes[..] } else { &sizes[..1] } {
                for &t in if uses_t { &ts[..] } else { &ts[..1] } {
                    match eval_bound(name, n, m, t) {
                        Ok(r) => rows.extend(r),
                        // with `all`, evaluators outside their domain are skipped
                        Err(_) if names.len() > 1 => {}
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    let bytes = match common.format {
        Format::Json => output::json(&serde_json::json!({ "version": env!("CARGO_PKG_VERSION"), "rows": rows }))?,
        Format::Csv => {
            let mut s = format!("# version={}\nbound,n,N,param,raw,value\n", env!("CARGO_PKG_VERSION"));
            let opt = |x: Option<String>| x.unwrap_or_default();
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.bound,
                    r.n,
                    opt(r.big_n.map(|v| v.to_string())),
                    opt(r.param.map(|v| v.to_string())),
                    r.raw,
                    r.value
                ));
            }
            s.into_bytes()
        }
    };
    emit(common, &bytes)
}

#[derive(Serialize)]
struct CapInfo {
    n: u32,
    offset: f64,
    height: f64,
    angle: f64,
    radius: f64,
    area: f64,
    area_fraction: f64,
    fraction_r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    area_bounds: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle_bounds: Option<(f64, f64)>,
}

fn caps(common: &Common, c: CapsArgs) -> Result<(), CliError> {
    let n = pick(c.n, &common.cfg, "n", 3u32)?;
    let s = c.spec;
    let p = if let Some(p) = s.p {
        p
    } else if let Some(h) = s.height {
        1.0 - h
    } else if let Some(a) = s.angle {
        a.cos()
    } else {
        crate::caps::offset_for_fraction(n, s.fraction.unwrap_or(f64::NAN))?
    };
    if !(-1.0..=1.0).contains(&p) {
        return Err(CliError::Usage(format!("cap offset must lie in [-1, 1], got {p}")));
    }
    let area = cap_area(n, p)?;
    let total = sphere_area(n)?;
    let r = total / area;
    let info = CapInfo {
        n,
        offset: p,
        height: 1.0 - p,
        angle: p.acos(),
        radius: (1.0 - p * p).max(0.0).sqrt(),
        area,
        area_fraction: area / total,
        fraction_r: r,
        area_bounds: (n >= 4 && p > 0.0).then(|| cap_area_bounds(n, p)).transpose()?,
        angle_bounds: (r >= 2.0).then(|| cap_angle_from_fraction(n, r).map(|a| (a.lower, a.upper))).transpose()?,
    };
    let bytes = match common.format {
        Format::Json => output::json(&info)?,
        Format::Csv => format!(
            "n,offset,height,angle,radius,area,area_fraction,R\n{},{},{},{},{},{},{},{}\n",
            info.n, info.offset, info.height, info.angle, info.radius, info.area, info.area_fraction, info.fraction_r
        )
        .into_bytes(),
    };
    emit(common, &bytes)
}
