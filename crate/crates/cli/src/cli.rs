//! The `ksn` command: `gen`, `fit`, `eval`, `check-z` and `report`.
//!
//! Exit status: 0 success, 1 I/O or malformed file, 2 unrepresentable
//! sample, 3 ambiguous float grouping, 4 bad arguments.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ksn_core::{
    build_incidence, check_z, residual_report, ClosedPath, Error as CoreError, KolmogorovNetwork, NumericMode, PhiKind,
    Rational, Transfer, TransferStack, ZReport,
};
use num_bigint::BigInt;

use crate::dataset::{parse_point, parse_points, Dataset, Target};
use crate::netfile::{self, AnyNetwork};
use crate::numtext::NumText;
use crate::{KsnError, Result};

#[derive(Parser)]
#[command(name = "ksn", version, about = "Exact three-layer Kolmogorov networks for arbitrary sampled functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a lattice (or scattered) dataset of a discontinuous target.
    Gen(GenArgs),
    /// Fit lookup tables to a dataset and write the network file.
    Fit(FitArgs),
    /// Evaluate a network at points.
    Eval(EvalArgs),
    /// Check a dataset's transfer values for closed paths.
    #[command(name = "check-z")]
    CheckZ(CheckArgs),
    /// Reconstruction residual of a network on a dataset.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Step,
    Checker,
    Random,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 5)]
    grid: usize,
    /// Checkerboard frequency.
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Seed of the random target (and of scattered coordinates).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit this many pseudo-random points instead of the lattice.
    #[arg(long)]
    points: Option<usize>,
    /// Output path; standard output when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiArg {
    /// Hashed piecewise-linear, exact in rational mode.
    Pl,
    /// (t + 1)^sqrt(2), float mode only.
    Power,
}

#[derive(Args)]
struct StackArgs {
    /// Exact rational arithmetic; decimals are read as exact fractions.
    #[arg(long)]
    rational: bool,
    /// Weight base lambda (default 1/2).
    #[arg(long)]
    lambda: Option<String>,
    /// Offset epsilon (default 1/(4d)).
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, value_enum, default_value = "pl")]
    phi: PhiArg,
    /// Seed of the piecewise-linear inner function.
    #[arg(long, default_value_t = 0x4B53_5431)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    segments: u32,
    /// Relative grouping tolerance for float mode (default 1e-12; must be 0
    /// in rational mode).
    #[arg(long)]
    tolerance: Option<String>,
}

#[derive(Args)]
struct FitArgs {
    data: PathBuf,
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    stack: StackArgs,
    /// Timestamp recorded in the file; defaults to SOURCE_DATE_EPOCH or now.
    #[arg(long)]
    timestamp: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    net: PathBuf,
    /// Inline point, e.g. `0.25,0.5`. Repeatable.
    #[arg(long = "point", allow_hyphen_values = true)]
    point: Vec<String>,
    /// CSV of points with header x1,...,xd (an f column is ignored).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Significant digits of float output.
    #[arg(long, default_value_t = 17)]
    precision: usize,
}

#[derive(Args)]
struct CheckArgs {
    data: PathBuf,
    #[command(flatten)]
    stack: StackArgs,
}

#[derive(Args)]
struct ReportArgs {
    net: PathBuf,
    data: PathBuf,
    #[arg(long, default_value_t = 17)]
    precision: usize,
}

/// Runs the command line and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 4;
        }
    };
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Fit(args) => cmd_fit(&args, out),
        Command::Eval(args) => cmd_eval(&args, out),
        Command::CheckZ(args) => cmd_check_z(&args, out),
        Command::Report(args) => cmd_report(&args, out),
    };
    match result {
        Ok(()) => 0,
        Err(KsnError::Core(CoreError::Unrepresentable(path))) => {
            let _ = writeln!(out, "unrepresentable: closed path on points {}", index_list(&path.points));
            let _ = writeln!(out, "witness = {}", tuple(&path.mu));
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(e: std::io::Error) -> KsnError {
    KsnError::io("<stdout>", e)
}

fn cmd_gen(args: &GenArgs, out: &mut impl Write) -> Result<()> {
    let target = match args.kind {
        GenKind::Step => Target::Step,
        GenKind::Checker => Target::Checker(args.m),
        GenKind::Random => Target::Random(args.seed),
    };
    let data = match args.points {
        Some(n) => Dataset::scattered(target, args.d, n, args.seed)?,
        None => Dataset::lattice(target, args.d, args.grid)?,
    };
    match &args.out {
        Some(path) => data.write(path),
        None => out.write_all(data.to_csv().as_bytes()).map_err(io_err),
    }
}

fn parse_arg<S: NumText>(name: &str, text: &str) -> Result<S> {
    S::parse_literal(text).ok_or_else(|| KsnError::Args(format!("invalid --{name} value {text:?}")))
}

fn build_stack<S: NumText>(args: &StackArgs, d: usize) -> Result<TransferStack<S>> {
    if d < 2 {
        return Err(KsnError::Args(format!("datasets need d > 1, found d = {d}")));
    }
    let lambda = args.lambda.as_deref().map_or(Ok(S::ratio(1, 2)), |t| parse_arg("lambda", t))?;
    let epsilon = args.epsilon.as_deref().map_or(Ok(S::ratio(1, 4 * d as i64)), |t| parse_arg("epsilon", t))?;
    let kind = match args.phi {
        PhiArg::Pl => PhiKind::HashedPiecewiseLinear { seed: args.seed, segments: args.segments },
        PhiArg::Power => PhiKind::TranscendentalPower,
    };
    TransferStack::with_params(d, lambda, epsilon, kind).map_err(|e| KsnError::Args(e.to_string()))
}

fn tolerance<S: NumText>(args: &StackArgs) -> Result<S> {
    match (&args.tolerance, S::MODE) {
        (None, NumericMode::Float64) => Ok(S::ratio(1, 1_000_000_000_000)),
        (None, NumericMode::ExactRational) => Ok(S::zero()),
        (Some(text), mode) => {
            let tol: S = parse_arg("tolerance", text)?;
            if tol.is_negative() || (mode == NumericMode::ExactRational && !tol.is_zero()) {
                return Err(KsnError::Args("tolerance must be >= 0, and exactly 0 with --rational".into()));
            }
            Ok(tol)
        }
    }
}

fn timestamp(explicit: Option<&str>) -> String {
    if let Some(t) = explicit {
        return t.to_string();
    }
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    when.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn cmd_fit(args: &FitArgs, out: &mut impl Write) -> Result<()> {
    let data = Dataset::read(&args.data)?;
    let origin = args.data.display().to_string();
    let stamp = timestamp(args.timestamp.as_deref());
    let net: AnyNetwork = if args.stack.rational {
        fit_mode::<Rational>(&data, &origin, &args.stack, stamp)?.into()
    } else {
        fit_mode::<f64>(&data, &origin, &args.stack, stamp)?.into()
    };
    netfile::save(&net, &args.out)?;
    let residual = match &net {
        AnyNetwork::Float(n) => n.provenance().residual.to_display(17),
        AnyNetwork::Rational(n) => n.provenance().residual.to_display(17),
    };
    writeln!(out, "fitted n = {}, d = {}, mode = {}", data.len(), net.d(), mode_label(net.mode())).map_err(io_err)?;
    writeln!(out, "max_abs_residual = {residual}").map_err(io_err)?;
    writeln!(out, "wrote {}", args.out.display()).map_err(io_err)
}

fn fit_mode<S: NumText>(data: &Dataset, origin: &str, args: &StackArgs, stamp: String) -> Result<KolmogorovNetwork<S>> {
    let sample = data.sample::<S>(origin)?;
    let stack = build_stack::<S>(args, data.d())?;
    Ok(KolmogorovNetwork::fit(stack, &sample, &tolerance::<S>(args)?, stamp)?)
}

fn mode_label(mode: NumericMode) -> &'static str {
    match mode {
        NumericMode::Float64 => "float64",
        NumericMode::ExactRational => "exact_rational",
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut impl Write) -> Result<()> {
    if args.point.is_empty() && args.points.is_none() {
        return Err(KsnError::Args("give at least one --point or a --points file".into()));
    }
    match netfile::load(&args.net)? {
        AnyNetwork::Float(net) => eval_mode(&net, args, out),
        AnyNetwork::Rational(net) => eval_mode(&net, args, out),
    }
}

fn eval_mode<S: NumText>(net: &KolmogorovNetwork<S>, args: &EvalArgs, out: &mut impl Write) -> Result<()> {
    let mut points: Vec<Vec<S>> = args.point.iter().map(|p| parse_point(p)).collect::<Result<_>>()?;
    if let Some(path) = &args.points {
        let text = std::fs::read_to_string(path).map_err(|e| KsnError::io(path, e))?;
        points.extend(parse_points::<S>(&text, &path.display().to_string())?);
    }
    for x in &points {
        let y = net.eval(x)?;
        writeln!(out, "{}", y.to_display(args.precision)).map_err(io_err)?;
    }
    Ok(())
}

fn cmd_check_z(args: &CheckArgs, out: &mut impl Write) -> Result<()> {
    let data = Dataset::read(&args.data)?;
    let origin = args.data.display().to_string();
    let report = if args.stack.rational {
        z_report::<Rational>(&data, &origin, &args.stack)?
    } else {
        z_report::<f64>(&data, &origin, &args.stack)?
    };
    out.write_all(format_z_report(&report).as_bytes()).map_err(io_err)
}

fn z_report<S: NumText>(data: &Dataset, origin: &str, args: &StackArgs) -> Result<ZReport> {
    let sample = data.sample::<S>(origin)?;
    let stack = build_stack::<S>(args, data.d())?;
    let w = stack.w_table(sample.points())?;
    Ok(check_z(&build_incidence(&w, &tolerance::<S>(args)?)?))
}

/// Line-oriented rendering of a [`ZReport`].
pub fn format_z_report(report: &ZReport) -> String {
    let counts: Vec<String> = report.group_counts.iter().map(usize::to_string).collect();
    let mut text = String::new();
    text += &format!("n = {}\n", report.n);
    text += &format!("blocks = {}\n", report.group_counts.len());
    text += &format!("s_k = {}\n", counts.join(" "));
    text += &format!("rank = {}\n", report.rank);
    text += &format!("nullspace_dim = {}\n", report.nullspace_dim);
    text += &format!("solvable_for_all_F = {}\n", report.solvable_for_all_f);
    text += &format!("z_satisfied = {}\n", report.z_satisfied);
    text += &format!("witness = {}\n", report.witness.as_deref().map_or("none".into(), tuple));
    text += &format!("closed_path = {}\n", report.closed_path.as_ref().map_or("none".into(), describe_path));
    if report.solvable_for_all_f {
        text += "Z: satisfied, rank = n\n";
    } else {
        text += &format!("Z: violated, rank = {} < n = {}\n", report.rank, report.n);
    }
    text
}

fn describe_path(path: &ClosedPath) -> String {
    format!("points {} mu = {}", index_list(&path.points), tuple(&path.mu))
}

fn tuple(values: &[BigInt]) -> String {
    let parts: Vec<String> = values.iter().map(BigInt::to_string).collect();
    format!("({})", parts.join(", "))
}

fn index_list(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn cmd_report(args: &ReportArgs, out: &mut impl Write) -> Result<()> {
    let data = Dataset::read(&args.data)?;
    match netfile::load(&args.net)? {
        AnyNetwork::Float(net) => report_mode(&net, &data, &args.data, args.precision, out),
        AnyNetwork::Rational(net) => report_mode(&net, &data, &args.data, args.precision, out),
    }
}

fn report_mode<S: NumText>(
    net: &KolmogorovNetwork<S>,
    data: &Dataset,
    path: &Path,
    precision: usize,
    out: &mut impl Write,
) -> Result<()> {
    let sample = data.sample::<S>(&path.display().to_string())?;
    let report = residual_report(net.stack(), net.tables(), &sample)?;
    let sizes: Vec<String> = report.table_sizes.iter().map(usize::to_string).collect();
    writeln!(out, "n = {}", sample.len()).map_err(io_err)?;
    writeln!(out, "max_abs_residual = {}", report.max_abs_residual.to_display(precision)).map_err(io_err)?;
    writeln!(out, "table_sizes = {}", sizes.join(" ")).map_err(io_err)?;
    writeln!(out, "distinct_keys = {}", report.distinct_keys).map_err(io_err)
}
