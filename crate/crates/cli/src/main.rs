//! `randtorus`: tables, samples and checks for random punctured tori.

// `!(x > 0.0)` guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use randtorus::closedform::{PdfKind, PdfSpec, SQUARE_LENGTH};
use randtorus::lame::solve_accessory;
use randtorus::mc::{self, Law, McConfig};
use randtorus::modmap::{
    build_cr_table, quasimobius_K, summary_stats, teich_cdf, teich_pdf, CrMapTable, DerivedKind, DerivedPdf,
    DEFAULT_M_MAX, DEFAULT_POINTS,
};
use randtorus::verify::{run_all, VerifyOptions};

use output::{write_json_file, Emitter, Format};

const UNITS: &str = "\
Units:
  lengths      hyperbolic length for curvature -1 (natural units)
  cross ratio  dimensionless; the canonical representative [Q] >= 2
  modulus      m = width/height of the conformal rectangle, m >= 1
  distance     Teichmuller distance d = ln m to the square torus, the log of
               the extremal dilatation (no factor 1/2)";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Compute(#[from] randtorus::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Parser)]
#[command(
    name = "randtorus",
    version,
    about = "Cross-ratio laws, Fuchsian groups and the modulus map of random punctured tori"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the result to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for all random sampling
    #[arg(long, global = true, env = "RANDTORUS_SEED", default_value_t = 20_240_601)]
    seed: u64,
    /// Significant digits of emitted numbers
    #[arg(long, global = true, default_value_t = 17, value_parser = clap::value_parser!(u32).range(1..=17))]
    precision: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a probability density
    #[command(after_help = UNITS)]
    Pdf(CurveArgs),
    /// Tabulate a distribution function
    #[command(after_help = UNITS)]
    Cdf(CurveArgs),
    /// Monte Carlo histogram, KS distance and sample statistics of a law
    #[command(after_help = UNITS)]
    Sample(SampleArgs),
    /// Cross ratio of the rectangle of a given modulus, or the whole table
    #[command(after_help = UNITS)]
    CrMap(CrMapArgs),
    /// Accessory parameter lambda of the Lame equation for rectangles of height tau
    #[command(after_help = UNITS)]
    Accessory(AccessoryArgs),
    /// Law of the Teichmuller distance to the square torus
    #[command(after_help = UNITS)]
    Teich(TeichArgs),
    /// Optimal dilatation between two quadruples of given cross ratio
    #[command(after_help = UNITS)]
    Quasimobius(QuasimobiusArgs),
    /// Run the acceptance checks and print a pass/fail table
    #[command(after_help = UNITS)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum DensityLaw {
    /// cross ratio of four uniform points on the circle, on the real line
    CrossratioFull,
    /// canonical cross ratio [Q] >= 2
    QuadCr,
    /// shorter perpendicular length, on (0, 2 asinh 1]
    Length,
    /// longer perpendicular length, on [2 asinh 1, inf)
    LengthDual,
    /// either perpendicular with probability 1/2
    LengthSampling,
    /// [i, 1, -1, z] for uniform z: standard Cauchy
    Star,
    /// conformal modulus m >= 1
    Modulus,
    /// Teichmuller distance d = ln m >= 0
    Teich,
}

impl DensityLaw {
    fn default_range(self) -> (f64, f64) {
        match self {
            DensityLaw::CrossratioFull => (-5.0, 5.0),
            DensityLaw::QuadCr => (2.0, 40.0),
            DensityLaw::Length => (0.0, SQUARE_LENGTH),
            DensityLaw::LengthDual => (SQUARE_LENGTH, 8.0),
            DensityLaw::LengthSampling => (0.0, 8.0),
            DensityLaw::Star => (-10.0, 10.0),
            DensityLaw::Modulus => (1.0, 10.0),
            DensityLaw::Teich => (0.0, 4.0),
        }
    }

    fn closed_form(self) -> Option<PdfKind> {
        Some(match self {
            DensityLaw::CrossratioFull => PdfKind::CrossRatioFull,
            DensityLaw::QuadCr => PdfKind::QuadCr,
            DensityLaw::Length => PdfKind::Length,
            DensityLaw::LengthDual => PdfKind::LengthDual,
            DensityLaw::LengthSampling => PdfKind::LengthSampling,
            DensityLaw::Star => PdfKind::NormalizedStar,
            DensityLaw::Modulus | DensityLaw::Teich => return None,
        })
    }
}

#[derive(Args)]
struct Grid {
    /// Left end of the grid [default: law-specific]
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    /// Right end of the grid [default: law-specific]
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    /// Grid spacing [default: (to - from)/500]
    #[arg(long)]
    step: Option<f64>,
    /// Evaluate at these points instead of a grid
    #[arg(long, num_args = 1.., allow_negative_numbers = true, conflicts_with_all = ["from", "to", "step"])]
    at: Vec<f64>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, value_enum)]
    law: DensityLaw,
    #[command(flatten)]
    grid: Grid,
    /// Cross-ratio table (CSV from `cr-map --table`) for the modulus and
    /// distance laws; built on the fly when absent
    #[arg(long)]
    cr_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SampleLaw {
    CrossratioFull,
    QuadCr,
    Length,
    Star,
    Modulus,
    Teich,
}

impl From<SampleLaw> for Law {
    fn from(l: SampleLaw) -> Law {
        match l {
            SampleLaw::CrossratioFull => Law::CrossratioFull,
            SampleLaw::QuadCr => Law::QuadCr,
            SampleLaw::Length => Law::Length,
            SampleLaw::Star => Law::Star,
            SampleLaw::Modulus => Law::Modulus,
            SampleLaw::Teich => Law::Teich,
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    law: SampleLaw,
    /// Number of samples
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Worker threads [default: all cores]; the output does not depend on it
    #[arg(long)]
    workers: Option<usize>,
    /// Histogram bins
    #[arg(long, default_value_t = mc::DEFAULT_BINS)]
    bins: usize,
    /// Histogram range, overriding the law's default clipped support
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    range: Option<Vec<f64>>,
    /// Cross-ratio table for the modulus and distance laws
    #[arg(long)]
    cr_table: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["modulus", "table"])))]
struct CrMapArgs {
    /// Solve for the rectangle of this modulus (tau = 1/m)
    #[arg(long)]
    modulus: Option<f64>,
    /// Emit the tabulated map on [mmin, mmax]
    #[arg(long)]
    table: bool,
    #[arg(long, default_value_t = 1.0)]
    mmin: f64,
    #[arg(long, default_value_t = DEFAULT_M_MAX)]
    mmax: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").required(true).args(["tau", "sweep"])))]
struct AccessoryArgs {
    /// Rectangle heights (the width is 1)
    #[arg(long, num_args = 1..)]
    tau: Vec<f64>,
    /// lambda over moduli in [mmin, mmax] instead
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value_t = 1.0)]
    mmin: f64,
    #[arg(long, default_value_t = 20.0)]
    mmax: f64,
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(Args)]
#[command(group(ArgGroup::new("what").args(["pdf", "cdf", "stats"])))]
struct TeichArgs {
    /// The density T(d) (default)
    #[arg(long)]
    pdf: bool,
    /// The distribution function
    #[arg(long)]
    cdf: bool,
    /// Mean, median, standard deviation and behavior at d = 0
    #[arg(long)]
    stats: bool,
    #[command(flatten)]
    grid: Grid,
    #[arg(long)]
    cr_table: Option<PathBuf>,
}

#[derive(Args)]
struct QuasimobiusArgs {
    /// Cross ratio [Q] >= 2 of the source quadruple
    #[arg(long)]
    src: f64,
    /// Cross ratio [Q] >= 2 of the target quadruple
    #[arg(long)]
    dst: f64,
    #[arg(long)]
    cr_table: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Skip the checks that need the full cross-ratio table
    #[arg(long)]
    quick: bool,
    /// Samples per law in the Monte Carlo check
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn points(grid: &Grid, default: (f64, f64)) -> Vec<f64> {
    if !grid.at.is_empty() {
        return grid.at.clone();
    }
    let from = grid.from.unwrap_or(default.0);
    let to = grid.to.unwrap_or(default.1);
    if !(from <= to) {
        usage_error(format!("--from {from} exceeds --to {to}"));
    }
    let step = grid.step.unwrap_or((to - from) / 500.0);
    if from == to {
        return vec![from];
    }
    if !(step > 0.0) {
        usage_error(format!("--step must be positive, got {step}"));
    }
    let n = ((to - from) / step * (1.0 + 1e-12)).floor();
    if n > 1e7 {
        usage_error(format!("grid of {n} points is too large"));
    }
    (0..=n as usize).map(|k| from + k as f64 * step).collect()
}

fn load_table(path: Option<&Path>) -> Result<CrMapTable, CliError> {
    match path {
        Some(p) => Ok(CrMapTable::read_csv(std::fs::File::open(p)?)?),
        None => Ok(build_cr_table(1.0, DEFAULT_M_MAX, DEFAULT_POINTS)?),
    }
}

fn curve(args: &CurveArgs, cdf: bool) -> Result<Value, CliError> {
    let xs = points(&args.grid, args.law.default_range());
    let col = if cdf { "cdf" } else { "pdf" };
    let rows = if let Some(kind) = args.law.closed_form() {
        let spec = PdfSpec::new(kind);
        xs.iter()
            .map(|&x| json!({ "x": x, col: if cdf { spec.cdf(x) } else { spec.pdf(x) } }))
            .collect()
    } else {
        let table = load_table(args.cr_table.as_deref())?;
        let kind = match args.law {
            DensityLaw::Modulus => DerivedKind::Modulus,
            _ => DerivedKind::Teich,
        };
        let d = DerivedPdf { kind, table: &table };
        xs.iter()
            .map(|&x| json!({ "x": x, col: if cdf { d.cdf(x) } else { d.pdf(x) } }))
            .collect()
    };
    Ok(Value::Array(rows))
}

fn sample(args: &SampleArgs, common: &Common, emitter: &Emitter) -> Result<(), CliError> {
    let law = Law::from(args.law);
    let mut cfg = McConfig::new(law, args.n, common.seed);
    cfg.bins = args.bins;
    if let Some(w) = args.workers {
        cfg.workers = w;
    }
    cfg.range = args.range.as_ref().map(|r| (r[0], r[1]));
    let table = if law.needs_table() {
        Some(load_table(args.cr_table.as_deref())?)
    } else {
        None
    };
    let summary = mc::run(&cfg, table.as_ref())?;
    let rows = serde_json::to_value(summary.histogram.rows())?;
    let mut info = summary.summary_json();
    match emitter.format {
        Format::Json => {
            info["histogram"] = rows;
            emitter.emit(info)
        }
        Format::Csv => {
            emitter.emit(rows)?;
            match &emitter.out {
                Some(p) => write_json_file(info, emitter.precision, &p.with_extension("json")),
                None => {
                    eprintln!("{info}");
                    Ok(())
                }
            }
        }
    }
}

fn cr_map(args: &CrMapArgs) -> Result<Value, CliError> {
    if let Some(m) = args.modulus {
        if !(m > 0.0) {
            usage_error(format!("--modulus must be positive, got {m}"));
        }
        return Ok(serde_json::to_value(solve_accessory(1.0 / m)?.record())?);
    }
    let table = build_cr_table(args.mmin, args.mmax, args.points)?;
    Ok(serde_json::to_value(table.nodes())?)
}

fn accessory(args: &AccessoryArgs) -> Result<Value, CliError> {
    if args.sweep {
        let table = build_cr_table(args.mmin, args.mmax, args.points)?;
        let rows = table
            .nodes()
            .iter()
            .map(|n| json!({ "modulus": n.m, "tau": n.tau, "lambda": n.lambda_acc, "cross_ratio": n.cross_ratio }))
            .collect();
        return Ok(Value::Array(rows));
    }
    let mut rows = Vec::with_capacity(args.tau.len());
    for &t in &args.tau {
        rows.push(serde_json::to_value(solve_accessory(t)?.record())?);
    }
    Ok(Value::Array(rows))
}

fn teich(args: &TeichArgs) -> Result<Value, CliError> {
    let table = load_table(args.cr_table.as_deref())?;
    if args.stats {
        return Ok(serde_json::to_value(summary_stats(&table)?)?);
    }
    let xs = points(&args.grid, (0.0, 4.0));
    let mut rows = Vec::with_capacity(xs.len());
    for d in xs {
        rows.push(if args.cdf {
            json!({ "d": d, "cdf": teich_cdf(&table, d)? })
        } else {
            json!({ "d": d, "pdf": if d < 0.0 { 0.0 } else { teich_pdf(&table, d)? } })
        });
    }
    Ok(Value::Array(rows))
}

fn quasimobius(args: &QuasimobiusArgs) -> Result<Value, CliError> {
    let table = load_table(args.cr_table.as_deref())?;
    let k = quasimobius_K(&table, args.src, args.dst)?;
    Ok(json!({
        "src": args.src,
        "dst": args.dst,
        "modulus_src": table.modulus_of_cr(args.src)?,
        "modulus_dst": table.modulus_of_cr(args.dst)?,
        "k": k,
    }))
}

fn verify(args: &VerifyArgs, common: &Common, emitter: &Emitter) -> Result<bool, CliError> {
    let opts = VerifyOptions {
        seed: common.seed,
        quick: args.quick,
        mc_samples: args.mc_samples,
    };
    let results = run_all(&opts);
    let ok = results.iter().all(|r| r.passed);
    match common.format {
        Some(_) => emitter.emit(serde_json::to_value(&results)?)?,
        None => {
            let passed = results.iter().filter(|r| r.passed).count();
            let mut text: String = results.iter().map(|r| format!("{r}\n")).collect();
            text.push_str(&format!("{passed}/{} checks pass\n", results.len()));
            match &common.out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(ok)
}

fn diagnostics(e: &CliError) -> Value {
    use randtorus::Error as E;
    let CliError::Compute(err) = e else {
        return json!({ "error": "io", "message": e.to_string() });
    };
    let (kind, extra) = match err {
        E::Degenerate(_) => ("degenerate", json!({})),
        E::Domain { what, value, expected } => {
            ("domain", json!({ "what": what, "value": value, "expected": expected }))
        }
        E::Convergence(_) => ("convergence", json!({})),
        E::Pole { re, im, dist } => ("pole", json!({ "re": re, "im": im, "dist": dist })),
        E::Bracket { lambda, reason } => ("bracket", json!({ "lambda": lambda, "reason": reason })),
        E::Solver { tau, reason, scan } => (
            "solver",
            json!({
                "tau": tau,
                "reason": reason,
                "scan": scan.iter().map(|(l, h)| json!({ "lambda": l, "residual": h })).collect::<Vec<_>>(),
            }),
        ),
        E::TableBuild { failed } => ("table_build", json!({ "failed_moduli": failed })),
        E::Range { what, value, lo, hi } => ("range", json!({ "what": what, "value": value, "lo": lo, "hi": hi })),
        E::Io(_) => ("io", json!({})),
    };
    let mut v = json!({ "error": kind, "message": err.to_string() });
    if let (Value::Object(o), Value::Object(x)) = (&mut v, extra) {
        o.extend(x);
    }
    v
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = &cli.common;
    let emitter = Emitter {
        format: common.format.unwrap_or(Format::Csv),
        precision: common.precision,
        out: common.out.clone(),
    };
    let result = match &cli.command {
        Command::Pdf(a) => curve(a, false).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Cdf(a) => curve(a, true).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Sample(a) => sample(a, common, &emitter).map(|_| true),
        Command::CrMap(a) => cr_map(a).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Accessory(a) => accessory(a).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Teich(a) => teich(a).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Quasimobius(a) => quasimobius(a).and_then(|v| emitter.emit(v)).map(|_| true),
        Command::Verify(a) => verify(a, common, &emitter),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", diagnostics(&e));
            match e {
                CliError::Compute(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
